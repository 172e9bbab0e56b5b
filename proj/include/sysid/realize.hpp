#ifndef SYSID_REALIZE_HPP
#define SYSID_REALIZE_HPP

#include "sysid/model.hpp"

namespace sysid {

// d-order realization recovered from a Hankel SVD with the symmetric
// Sigma^{1/2} split. sigma holds the leading d singular values of the padded
// Hankel the model came from; obs/ctrl factors are kept for Gram-balance
// diagnostics ((obs^T obs) == (ctrl ctrl^T) == diag(sigma)).
struct TruncatedModel {
  int d = 0;
  Matrix A, B, C, D;
  Vector sigma;
  Matrix obs_factor;   // U_d Sigma_d^{1/2}
  Matrix ctrl_factor;  // Sigma_d^{1/2} V_d^T
  int effective_order = 0;  // singular values above rank_tol * sigma_1
  bool degenerate = false;  // sigma_d fell below rank_tol * sigma_1
};

struct RealizeOptions {
  double rank_tol = 1e-12;  // relative pseudoinverse / rank cutoff
  // Padding of the Hankel built from G; -1 -> rk+r rows, mk columns.
  // Milder truncations can be requested for numerical stability.
  Index pad_rows = -1;
  Index pad_cols = -1;
};

// Ho-Kalman estimates: assemble the Hankel from all of G's blocks, pad to
// rk+r rows and mk columns, take the SVD and keep the leading d triples:
//   C_hat = first r rows of U Sigma^{1/2},
//   B_hat = first m columns of Sigma^{1/2} V^T,
//   A_hat = pinv((U Sigma^{1/2})[rows 1..rk]) (U Sigma^{1/2})[rows r+1..rk+r].
// Requires 1 <= d <= k. A sigma_d below rank_tol * sigma_1 flags the model
// degenerate (still returned at the requested d).
TruncatedModel ho_kalman(const MarkovMatrix& G, int d,
                         const RealizeOptions& options = {});

// d-order balanced truncation of the true system. H_{0,infinity} is
// approximated by H_{0,L} with L chosen so the geometric tail
// ||C|| ||A||^L ||B|| / (1 - ||A||) drops below tail_tol, then the same
// symmetric split as ho_kalman is applied. Requires spectral_norm(A) < 1 and
// 1 <= d <= n.
TruncatedModel true_balanced_truncation(const SystemRealization& sys, int d,
                                        double tail_tol = 1e-12);

// Spectral norm of C1 A1^i B1 - C2 A2^i B2, the similarity-invariant
// realization metric.
double markov_product_error(const Matrix& A1, const Matrix& B1,
                            const Matrix& C1, const Matrix& A2,
                            const Matrix& B2, const Matrix& C2, int i);
double markov_product_error(const TruncatedModel& m1, const TruncatedModel& m2,
                            int i);
double markov_product_error(const SystemRealization& sys,
                            const TruncatedModel& m, int i);

// Orthogonal Q minimizing ||M_true - M_est Q||_F (SVD of M_est^T M_true).
Matrix procrustes_align(const Matrix& M_true, const Matrix& M_est);

// epsilon_d: spectral norm of (L-truncated H_{0,infinity}) minus the
// zero-padded Hankel of G_hat at order d, embedded in a common rL x mL frame.
double hankel_gap(const SystemRealization& sys, const MarkovMatrix& G_hat,
                  int d, double tail_tol = 1e-12);

}  // namespace sysid

#endif
