#include "sysid/sim.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "sysid/numfmt.hpp"

namespace sysid {

RegressionData RegressionData::head(Index t) const {
  if (t < 1 || t > T)
    throw std::out_of_range("RegressionData::head: t out of range");
  RegressionData out;
  out.k = k;
  out.m = m;
  out.r = r;
  out.T = t;
  out.Y = Y.leftCols(t);
  out.U = U.leftCols(t);
  return out;
}

std::vector<std::uint8_t> sample_attack_mask(double p, Index L,
                                             RngStream& rng) {
  if (!(p >= 0.0 && p < 1.0))
    throw ConfigError("sample_attack_mask: p must lie in [0,1)");
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(L), 0);
  for (auto& b : mask) b = rng.bernoulli(p) ? 1 : 0;
  return mask;
}

Vector attack_value(const AttackModel& attack, const Vector& x_t,
                    RngStream& rng) {
  const Index n = x_t.size();
  const double sd = std::sqrt(attack.cov_scale);
  switch (attack.strategy) {
    case AttackStrategy::None:
      throw std::logic_error(
          "attack_value: strategy 'none' invoked at a flagged time");
    case AttackStrategy::IidGaussian: {
      Vector w = rng.normal_vector(n, sd);
      w.array() += attack.mean;
      return w;
    }
    case AttackStrategy::StateAdaptive: {
      const double pos = attack.sign_rule == SignRule::PositiveHigh
                             ? attack.mean_high
                             : attack.mean_low;
      const double nonpos = attack.sign_rule == SignRule::PositiveHigh
                                ? attack.mean_low
                                : attack.mean_high;
      Vector w = rng.normal_vector(n, sd);
      for (Index i = 0; i < n; ++i) w[i] += x_t[i] > 0.0 ? pos : nonpos;
      return w;
    }
  }
  throw std::logic_error("attack_value: unknown strategy");
}

Trajectory simulate(const SystemRealization& sys, const InputModel& input,
                    const AttackModel& attack, Index L, const X0Spec& x0,
                    RngStream& input_rng, RngStream& attack_rng) {
  if (L < 1) throw ConfigError("simulate: horizon must be >= 1");
  if (input.deterministic) {
    if (input.deterministic->rows() != sys.m ||
        input.deterministic->cols() < L)
      throw InputError("simulate: deterministic input override is m x L");
  } else if (!(input.gamma > 0.0)) {
    throw ConfigError("simulate: gamma must be > 0 without an input override");
  }
  if (attack.strategy == AttackStrategy::None && attack.p != 0.0)
    throw ConfigError("simulate: attack strategy 'none' requires p = 0");

  Trajectory traj;
  traj.inputs = input.deterministic
                    ? Matrix(input.deterministic->leftCols(L))
                    : input_rng.normal_matrix(sys.m, L, input.gamma);
  traj.states.resize(sys.n, L + 1);
  traj.outputs.resize(sys.r, L);
  traj.attacks = Matrix::Zero(sys.n, L);
  traj.xi = sample_attack_mask(attack.p, L, attack_rng);

  switch (x0.kind) {
    case X0Spec::Kind::ConstantFill:
      traj.states.col(0).setConstant(x0.fill);
      break;
    case X0Spec::Kind::FixedVector:
      if (x0.fixed.size() != sys.n)
        throw InputError("simulate: x0 vector has wrong dimension");
      traj.states.col(0) = x0.fixed;
      break;
    case X0Spec::Kind::Gaussian:
      traj.states.col(0) = input_rng.normal_vector(sys.n, x0.sigma);
      break;
  }

  constexpr double kOverflowGuard = 1e12;
  for (Index t = 0; t < L; ++t) {
    const auto x_t = traj.states.col(t);
    traj.outputs.col(t) = sys.C * x_t + sys.D * traj.inputs.col(t);
    if (traj.xi[static_cast<std::size_t>(t)])
      traj.attacks.col(t) = attack_value(attack, x_t, attack_rng);
    traj.states.col(t + 1) =
        sys.A * x_t + sys.B * traj.inputs.col(t) + traj.attacks.col(t);
    const double amp = traj.states.col(t + 1).cwiseAbs().maxCoeff();
    if (!(amp <= kOverflowGuard))
      throw SimulationError(
          "simulate: state exceeded overflow guard at step " +
              std::to_string(t + 1),
          t + 1);
  }
  return traj;
}

Vector regressor_stack(const Trajectory& traj, Index t, int k) {
  const Index m = traj.inputs.rows();
  if (k < 1) throw InputError("regressor_stack: k must be >= 1");
  if (t < 2 * k - 1 || t >= traj.horizon())
    throw std::out_of_range("regressor_stack: need 2k-1 <= t < horizon");
  Vector u(2 * k * m);
  for (Index j = 0; j < 2 * k; ++j)
    u.segment(j * m, m) = traj.inputs.col(t - j);
  return u;
}

RegressionData assemble_regression(const Trajectory& traj, int k) {
  if (k < 1) throw InputError("assemble_regression: k must be >= 1");
  const Index L = traj.horizon();
  if (L < 2 * k)
    throw std::out_of_range("assemble_regression: horizon must be >= 2k");
  RegressionData data;
  data.k = k;
  data.m = static_cast<int>(traj.inputs.rows());
  data.r = static_cast<int>(traj.outputs.rows());
  data.T = L - (2 * k - 1);
  data.Y.resize(data.r, data.T);
  data.U.resize(Index(2) * k * data.m, data.T);
  for (Index j = 0; j < data.T; ++j) {
    const Index t = 2 * k - 1 + j;
    data.Y.col(j) = traj.outputs.col(t);
    data.U.col(j) = regressor_stack(traj, t, k);
  }
  return data;
}

ObservationDecomposition observation_decomposition(const SystemRealization& sys,
                                                   const Trajectory& traj,
                                                   Index t, int k) {
  if (k < 1) throw InputError("observation_decomposition: k must be >= 1");
  if (t < 2 * k - 1 || t >= traj.horizon())
    throw std::out_of_range(
        "observation_decomposition: need 2k-1 <= t < horizon");

  ObservationDecomposition out;
  const MarkovMatrix G = markov_parameters(sys, k);
  out.input_term = G.G * regressor_stack(traj, t, k);

  Matrix CA = sys.C;  // C A^j
  out.attack_term = Vector::Zero(sys.r);
  for (int j = 0; j <= 2 * k - 2; ++j) {
    out.attack_term += CA * traj.attacks.col(t - 1 - j);
    CA *= sys.A;
  }
  out.tail_term = CA * traj.states.col(t - (2 * k - 1));  // CA is C A^{2k-1}
  return out;
}

BoolGrid attack_term_zero_mask(const SystemRealization& sys,
                               const Trajectory& traj, int k) {
  const Index L = traj.horizon();
  if (L < 2 * k)
    throw std::out_of_range("attack_term_zero_mask: horizon must be >= 2k");
  const Index T = L - (2 * k - 1);

  std::vector<Matrix> CA(2 * k - 1);
  CA[0] = sys.C;
  for (int j = 1; j <= 2 * k - 2; ++j) CA[j] = CA[j - 1] * sys.A;

  BoolGrid mask(sys.r, T);
  Vector v(sys.r);
  for (Index col = 0; col < T; ++col) {
    const Index t = 2 * k - 1 + col;
    v.setZero();
    for (int j = 0; j <= 2 * k - 2; ++j) {
      if (traj.xi[static_cast<std::size_t>(t - 1 - j)])
        v += CA[j] * traj.attacks.col(t - 1 - j);
    }
    for (int i = 0; i < sys.r; ++i) mask(i, col) = v[i] == 0.0 ? 1 : 0;
  }
  return mask;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          bool debug) {
  const Index L = traj.horizon();
  const Index m = traj.inputs.rows();
  const Index r = traj.outputs.rows();
  const Index n = traj.states.rows();

  os << "t";
  for (Index i = 1; i <= m; ++i) os << ",u_" << i;
  for (Index i = 1; i <= r; ++i) os << ",y_" << i;
  os << ",xi";
  if (debug) {
    for (Index i = 1; i <= n; ++i) os << ",x_" << i;
    for (Index i = 1; i <= n; ++i) os << ",w_" << i;
  }
  os << "\n";

  for (Index t = 0; t < L; ++t) {
    os << t;
    for (Index i = 0; i < m; ++i) os << ',' << g17(traj.inputs(i, t));
    for (Index i = 0; i < r; ++i) os << ',' << g17(traj.outputs(i, t));
    os << ',' << int(traj.xi[static_cast<std::size_t>(t)]);
    if (debug) {
      for (Index i = 0; i < n; ++i) os << ',' << g17(traj.states(i, t));
      for (Index i = 0; i < n; ++i) os << ',' << g17(traj.attacks(i, t));
    }
    os << "\n";
  }
}

}  // namespace sysid
