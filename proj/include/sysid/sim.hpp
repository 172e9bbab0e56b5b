#ifndef SYSID_SIM_HPP
#define SYSID_SIM_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "sysid/model.hpp"

namespace sysid {

// Gaussian process inputs u_t ~ N(0, gamma^2 I_m), or a fixed m x L sequence
// for deterministic tests.
struct InputModel {
  double gamma = 1.0;
  int m = 1;
  std::optional<Matrix> deterministic;
};

enum class AttackStrategy { None, IidGaussian, StateAdaptive };

// Which mean a strictly positive state coordinate selects under the
// state-adaptive strategy; zero coordinates count as non-positive.
enum class SignRule { PositiveHigh, PositiveLow };

struct AttackModel {
  double p = 0.0;
  AttackStrategy strategy = AttackStrategy::None;
  double mean = 0.0;                        // iid_gaussian
  double mean_low = 0.0, mean_high = 0.0;   // state_adaptive
  double cov_scale = 0.0;                   // per-coordinate variance
  double eta = 0.0;                         // nominal sub-Gaussian bound, reporting only
  SignRule sign_rule = SignRule::PositiveHigh;
};

struct X0Spec {
  enum class Kind { ConstantFill, FixedVector, Gaussian };
  Kind kind = Kind::ConstantFill;
  double fill = 0.0;
  Vector fixed;
  double sigma = 1.0;

  static X0Spec constant(double v) {
    X0Spec s;
    s.kind = Kind::ConstantFill;
    s.fill = v;
    return s;
  }
  static X0Spec vector(Vector v) {
    X0Spec s;
    s.kind = Kind::FixedVector;
    s.fixed = std::move(v);
    return s;
  }
  static X0Spec gaussian(double sigma) {
    X0Spec s;
    s.kind = Kind::Gaussian;
    s.sigma = sigma;
    return s;
  }
};

// One simulated run. Columns index time; states has one extra column so the
// dynamics identity x_{t+1} = A x_t + B u_t + w_t is checkable end to end.
struct Trajectory {
  Matrix inputs;   // m x L
  Matrix states;   // n x (L+1)
  Matrix outputs;  // r x L
  Matrix attacks;  // n x L, column t is exactly zero when xi[t] == 0
  std::vector<std::uint8_t> xi;

  Index horizon() const { return inputs.cols(); }
};

// Regression window: Y's column j is y_{2k-1+j}, U's column j stacks the
// inputs [u_t; u_{t-1}; ...; u_{t-2k+1}] at t = 2k-1+j.
struct RegressionData {
  int k = 0, m = 0, r = 0;
  Index T = 0;
  Matrix Y;  // r x T
  Matrix U;  // 2km x T

  RegressionData head(Index t) const;
};

std::vector<std::uint8_t> sample_attack_mask(double p, Index L,
                                             RngStream& rng);

// Attack vector at a flagged time. Strategy None at a flagged time is an
// internal error: the mask must be all-false in that case.
Vector attack_value(const AttackModel& attack, const Vector& x_t,
                    RngStream& rng);

Trajectory simulate(const SystemRealization& sys, const InputModel& input,
                    const AttackModel& attack, Index L, const X0Spec& x0,
                    RngStream& input_rng, RngStream& attack_rng);

Vector regressor_stack(const Trajectory& traj, Index t, int k);

RegressionData assemble_regression(const Trajectory& traj, int k);

// The three summands of the observation decomposition at time t:
//   y_t = G*_k U_t  +  [C, CA, ..., CA^{2k-2}][w_{t-1}; ...; w_{t-2k+1}]
//        + C A^{2k-1} x_{t-2k+1}.
struct ObservationDecomposition {
  Vector input_term;
  Vector attack_term;  // v_t
  Vector tail_term;
};

ObservationDecomposition observation_decomposition(const SystemRealization& sys,
                                                   const Trajectory& traj,
                                                   Index t, int k);

// r x T grid marking, for each regression sample t = 2k-1+j and output row i,
// whether v_t^i is exactly zero. Simulation knows w, so this is exact.
BoolGrid attack_term_zero_mask(const SystemRealization& sys,
                               const Trajectory& traj, int k);

// Columns t, u_1..u_m, y_1..y_r, xi; debug adds x_1..x_n and w_1..w_n.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          bool debug = false);

}  // namespace sysid

#endif
