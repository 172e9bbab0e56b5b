#include "sysid/bounds.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace sysid {

namespace {

Matrix matrix_power(const Matrix& A, int p) {
  Matrix out = Matrix::Identity(A.rows(), A.cols());
  for (int i = 0; i < p; ++i) out *= A;
  return out;
}

void check_q(double q) {
  if (!(q < 0.5))
    throw AssumptionError("Assumption 3: window attack mass q = " +
                          std::to_string(q) + " >= 0.5");
}

}  // namespace

double attack_mass_q(double p, int k) {
  if (!(p >= 0.0 && p < 1.0))
    throw InputError("attack_mass_q: p must lie in [0,1)");
  if (k < 1) throw InputError("attack_mass_q: k must be >= 1");
  return -std::expm1(double(2 * k - 1) * std::log1p(-p));
}

double sample_complexity(int k, int m, int r, double q, double delta,
                         double c) {
  if (k < 1 || m < 1 || r < 1)
    throw InputError("sample_complexity: k, m, r must be >= 1");
  if (!(delta > 0.0 && delta <= 1.0))
    throw InputError("sample_complexity: delta must lie in (0,1]");
  if (!(c > 0.0)) throw InputError("sample_complexity: c must be > 0");
  check_q(q);
  const double km = double(k) * m;
  const double one_minus = 1.0 - 2.0 * q;
  return c * (double(k) / (one_minus * one_minus)) *
         (km * std::log(km / one_minus) + std::log(double(r) / delta));
}

double markov_error_bound(const SystemRealization& sys, int k, double q,
                          double eta, double gamma, double c) {
  if (k < 1) throw InputError("markov_error_bound: k must be >= 1");
  if (!(gamma > 0.0)) throw InputError("markov_error_bound: gamma must be > 0");
  check_q(q);
  const double a = spectral_norm(sys.A);
  if (!(a < 1.0))
    throw AssumptionError("Assumption 1: spectral_norm(A) >= 1");
  const double a_pow = spectral_norm(matrix_power(sys.A, 2 * k - 1));
  return c * a_pow * spectral_norm(sys.C) * std::sqrt(double(sys.r)) /
         ((1.0 - a) * (1.0 - 2.0 * q)) *
         (eta / gamma + std::sqrt(double(sys.m)) * spectral_norm(sys.B));
}

RetrievalBounds retrieval_error_bounds(const SystemRealization& sys, int k,
                                       double q, double eta, double gamma,
                                       double sigma_hat_k, double c) {
  if (k < 1) throw InputError("retrieval_error_bounds: k must be >= 1");
  if (!(sigma_hat_k > 0.0))
    throw ConfigError("retrieval_error_bounds: sigma_hat_k <= 0 (degenerate order)");
  if (!(gamma > 0.0))
    throw InputError("retrieval_error_bounds: gamma must be > 0");
  check_q(q);
  const double a = spectral_norm(sys.A);
  if (!(a < 1.0))
    throw AssumptionError("Assumption 1: spectral_norm(A) >= 1");

  const double a_k = spectral_norm(matrix_power(sys.A, k));
  const double a_2k1 = spectral_norm(matrix_power(sys.A, 2 * k - 1));
  RetrievalBounds out;
  out.nu = spectral_norm(sys.C) / (1.0 - 2.0 * q) *
           (eta / gamma + std::sqrt(double(sys.m)) * spectral_norm(sys.B));
  const double numer =
      std::max(a_k, std::sqrt(double(k) * sys.r) * a_2k1) * double(k) * out.nu;
  out.d_bound = c * std::sqrt(double(sys.r)) * a_2k1 * out.nu / (1.0 - a);
  out.bc_bound = c * numer / (std::sqrt(sigma_hat_k) * (1.0 - a));
  out.a_bound = c * numer * a / (sigma_hat_k * (1.0 - a));
  return out;
}

Vector uniqueness_certificate(const RegressionData& data,
                              const BoolGrid& v_zero_mask, int n_directions,
                              RngStream& rng) {
  if (n_directions < 1)
    throw InputError("uniqueness_certificate: n_directions must be >= 1");
  if (v_zero_mask.rows() != data.Y.rows() || v_zero_mask.cols() < data.T)
    throw InputError("uniqueness_certificate: mask shape mismatch");

  const Index d = data.U.rows();
  const Index r = data.Y.rows();
  Vector cert =
      Vector::Constant(r, std::numeric_limits<double>::infinity());
  for (int dir = 0; dir < n_directions; ++dir) {
    const Vector s = rng.normal_vector(d).normalized();
    const Vector a = (s.transpose() * data.U).cwiseAbs().transpose();
    for (Index i = 0; i < r; ++i) {
      double sum = 0.0;
      for (Index t = 0; t < data.T; ++t)
        if (v_zero_mask(i, t)) sum += a[t];
      cert[i] = std::min(cert[i], sum / double(data.T));
    }
  }
  return cert;
}

BoundReport evaluate_bounds(const SystemRealization& sys, int k, double p,
                            double eta, double gamma, double delta,
                            double sigma_hat_k, double c) {
  BoundReport report;
  report.q = attack_mass_q(p, k);
  report.a1_ok = spectral_norm(sys.A) < 1.0;
  report.a2_ok = eta >= 0.0;
  report.a3_ok = p < 1.0 / double(4 * k - 2);
  report.T_star = sample_complexity(k, sys.m, sys.r, report.q, delta, c);
  report.markov_bound = markov_error_bound(sys, k, report.q, eta, gamma, c);
  if (sigma_hat_k > 0.0) {
    report.retrieval =
        retrieval_error_bounds(sys, k, report.q, eta, gamma, sigma_hat_k, c);
    report.nu = report.retrieval.nu;
  }
  return report;
}

}  // namespace sysid
