#ifndef SYSID_BOUNDS_HPP
#define SYSID_BOUNDS_HPP

#include "sysid/model.hpp"
#include "sysid/sim.hpp"

namespace sysid {

// Theoretical order values. All bounds carry an explicit multiplicative
// constant c (default 1) in place of the hidden Theta constants; they check
// scaling behavior, not constant levels.
struct RetrievalBounds {
  double d_bound = 0.0;
  double bc_bound = 0.0;
  double a_bound = 0.0;
  double nu = 0.0;
};

struct BoundReport {
  double q = 0.0;             // window attack mass 1 - (1-p)^{2k-1}
  double T_star = 0.0;        // sample-complexity order value
  double markov_bound = 0.0;  // Frobenius-error order value
  RetrievalBounds retrieval;
  double nu = 0.0;
  bool a1_ok = false;  // spectral norm < 1
  bool a2_ok = false;  // nominal sub-Gaussian bound available
  bool a3_ok = false;  // p < 1/(4k-2)
};

// q = 1 - (1-p)^{2k-1}.
double attack_mass_q(double p, int k);

// c * (k/(1-2q)^2) * (km log(km/(1-2q)) + log(r/delta)), natural log.
// Requires q < 0.5.
double sample_complexity(int k, int m, int r, double q, double delta,
                         double c = 1.0);

// c * ||A^{2k-1}|| ||C|| sqrt(r) / ((1-||A||)(1-2q)) * (eta/gamma +
// sqrt(m) ||B||).
double markov_error_bound(const SystemRealization& sys, int k, double q,
                          double eta, double gamma, double c = 1.0);

// The three retrieval order values, with
// nu = (||C||/(1-2q)) (eta/gamma + sqrt(m)||B||):
//   D:   c sqrt(r) ||A^{2k-1}|| nu / (1-||A||)
//   B/C: c max{||A^k||, sqrt(kr) ||A^{2k-1}||} k nu / (sqrt(sigma_k)(1-||A||))
//   A:   same numerator * ||A|| / (sigma_k (1-||A||)).
RetrievalBounds retrieval_error_bounds(const SystemRealization& sys, int k,
                                       double q, double eta, double gamma,
                                       double sigma_hat_k, double c = 1.0);

// Monte-Carlo certificate for the uniqueness condition: per output row i,
//   min over sampled unit directions s of
//   (1/T) sum_t 1{v_t^i = 0} |s^T U_t|.
// Strictly positive values are evidence for the condition; a zero is a
// definite failure at a sampled direction.
Vector uniqueness_certificate(const RegressionData& data,
                              const BoolGrid& v_zero_mask, int n_directions,
                              RngStream& rng);

BoundReport evaluate_bounds(const SystemRealization& sys, int k, double p,
                            double eta, double gamma, double delta,
                            double sigma_hat_k, double c = 1.0);

}  // namespace sysid

#endif
