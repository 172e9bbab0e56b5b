#include "sysid/realize.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <string>
#include <vector>

namespace sysid {

namespace {

// Thin SVD with a deterministic sign convention: each left-singular column
// is oriented so its largest-magnitude entry is positive.
struct SignedSvd {
  Matrix U, V;
  Vector sigma;
};

SignedSvd signed_svd(const Matrix& M) {
  SignedSvd out;
  if (std::min(M.rows(), M.cols()) <= 32) {
    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.U = svd.matrixU();
    out.V = svd.matrixV();
    out.sigma = svd.singularValues();
  } else {
    Eigen::BDCSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.U = svd.matrixU();
    out.V = svd.matrixV();
    out.sigma = svd.singularValues();
  }
  for (Index j = 0; j < out.U.cols(); ++j) {
    Index imax = 0;
    out.U.col(j).cwiseAbs().maxCoeff(&imax);
    if (out.U(imax, j) < 0.0) {
      out.U.col(j) = -out.U.col(j);
      out.V.col(j) = -out.V.col(j);
    }
  }
  return out;
}

Matrix pinv(const Matrix& M, double rel_cutoff) {
  if (M.rows() == 0 || M.cols() == 0)
    return Matrix::Zero(M.cols(), M.rows());
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double cutoff = rel_cutoff * (s.size() > 0 ? s(0) : 0.0);
  Vector sinv = Vector::Zero(s.size());
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff && s(i) > 0.0) sinv(i) = 1.0 / s(i);
  return svd.matrixV() * sinv.asDiagonal() * svd.matrixU().transpose();
}

// Shared tail: build the model from a padded/truncated Hankel frame.
// shift_rows is the row count of the up/down-shifted observability blocks.
TruncatedModel model_from_hankel(const Matrix& H, int d, int r, int m,
                                 Index shift_rows, const Matrix& D,
                                 double rank_tol) {
  const SignedSvd svd = signed_svd(H);
  const Index avail = svd.sigma.size();
  const double s1 = avail > 0 ? svd.sigma(0) : 0.0;

  TruncatedModel model;
  model.d = d;
  model.D = D;
  model.sigma = Vector::Zero(d);
  const Index keep = std::min<Index>(d, avail);
  model.sigma.head(keep) = svd.sigma.head(keep);

  model.effective_order = 0;
  for (Index i = 0; i < std::min<Index>(avail, d); ++i)
    if (svd.sigma(i) > rank_tol * s1 && svd.sigma(i) > 0.0)
      ++model.effective_order;
  model.degenerate = model.sigma(d - 1) <= rank_tol * s1;

  const Vector sqrt_sigma = model.sigma.cwiseSqrt();
  Matrix Ud = Matrix::Zero(H.rows(), d);
  Matrix Vd = Matrix::Zero(H.cols(), d);
  Ud.leftCols(keep) = svd.U.leftCols(keep);
  Vd.leftCols(keep) = svd.V.leftCols(keep);

  model.obs_factor = Ud * sqrt_sigma.asDiagonal();
  model.ctrl_factor = sqrt_sigma.asDiagonal() * Vd.transpose();

  model.C = model.obs_factor.topRows(r);
  model.B = model.ctrl_factor.leftCols(m);
  if (shift_rows > 0) {
    model.A = pinv(model.obs_factor.topRows(shift_rows), rank_tol) *
              model.obs_factor.bottomRows(shift_rows);
  } else {
    model.A = Matrix::Zero(d, d);  // no shift information in the frame
  }
  return model;
}

// Blocks C A^{j} B for j = 0..count-1.
std::vector<Matrix> markov_blocks(const SystemRealization& sys, Index count) {
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<std::size_t>(count));
  Matrix CA = sys.C;
  for (Index j = 0; j < count; ++j) {
    blocks.push_back(CA * sys.B);
    if (j + 1 < count) CA *= sys.A;
  }
  return blocks;
}

Matrix dense_hankel(const std::vector<Matrix>& blocks, Index L, int r, int m) {
  Matrix H = Matrix::Zero(Index(r) * L, Index(m) * L);
  for (Index i = 0; i < L; ++i)
    for (Index j = 0; j < L; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i + j);
      if (idx < blocks.size()) H.block(i * r, j * m, r, m) = blocks[idx];
    }
  return H;
}

// Smallest L with ||C|| ||A||^L ||B|| / (1 - ||A||) < tail_tol.
Index tail_length(const SystemRealization& sys, double tail_tol) {
  const double a = spectral_norm(sys.A);
  if (!(a < 1.0))
    throw InputError("balanced truncation requires spectral_norm(A) < 1");
  const double cb = spectral_norm(sys.C) * spectral_norm(sys.B);
  double tail = cb / (1.0 - a);
  Index L = 1;
  constexpr Index kMaxBlocks = 4096;
  while (tail * std::pow(a, double(L)) >= tail_tol) {
    if (++L > kMaxBlocks)
      throw ConfigError(
          "balanced truncation: tail_tol unreachable within " +
          std::to_string(kMaxBlocks) + " Hankel blocks (||A|| too close to 1)");
  }
  return L;
}

}  // namespace

TruncatedModel ho_kalman(const MarkovMatrix& G, int d,
                         const RealizeOptions& options) {
  if (d < 1 || d > G.k)
    throw std::out_of_range("ho_kalman: need 1 <= d <= k");
  const int k = G.k, r = G.r, m = G.m;
  const Index rows = options.pad_rows > 0 ? options.pad_rows
                                          : Index(r) * k + r;
  const Index cols = options.pad_cols > 0 ? options.pad_cols : Index(m) * k;
  const HankelBlock padded =
      zero_pad_truncate(hankel_from_markov(G, k), rows, cols);

  // Shifted blocks span full block rows of the frame.
  const Index shift_rows = (rows / r - 1) * r;
  TruncatedModel model = model_from_hankel(padded.M, d, r, m, shift_rows,
                                           G.block(0), options.rank_tol);
  return model;
}

TruncatedModel true_balanced_truncation(const SystemRealization& sys, int d,
                                        double tail_tol) {
  if (d < 1 || d > sys.n)
    throw std::out_of_range("true_balanced_truncation: need 1 <= d <= n");
  const Index L = tail_length(sys, tail_tol);
  const Matrix H =
      dense_hankel(markov_blocks(sys, 2 * L - 1), L, sys.r, sys.m);
  return model_from_hankel(H, d, sys.r, sys.m, (L - 1) * sys.r, sys.D,
                           1e-12);
}

double markov_product_error(const Matrix& A1, const Matrix& B1,
                            const Matrix& C1, const Matrix& A2,
                            const Matrix& B2, const Matrix& C2, int i) {
  if (i < 0) throw InputError("markov_product_error: i must be >= 0");
  if (C1.rows() != C2.rows() || B1.cols() != B2.cols())
    throw InputError("markov_product_error: incompatible r or m");
  Matrix P1 = C1, P2 = C2;
  for (int j = 0; j < i; ++j) {
    P1 *= A1;
    P2 *= A2;
  }
  return spectral_norm(P1 * B1 - P2 * B2);
}

double markov_product_error(const TruncatedModel& m1, const TruncatedModel& m2,
                            int i) {
  return markov_product_error(m1.A, m1.B, m1.C, m2.A, m2.B, m2.C, i);
}

double markov_product_error(const SystemRealization& sys,
                            const TruncatedModel& m, int i) {
  return markov_product_error(sys.A, sys.B, sys.C, m.A, m.B, m.C, i);
}

Matrix procrustes_align(const Matrix& M_true, const Matrix& M_est) {
  if (M_true.rows() != M_est.rows() || M_true.cols() != M_est.cols())
    throw InputError("procrustes_align: shapes must match");
  Eigen::JacobiSVD<Matrix> svd(M_est.transpose() * M_true,
                               Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

double hankel_gap(const SystemRealization& sys, const MarkovMatrix& G_hat,
                  int d, double tail_tol) {
  if (d < 1 || d > G_hat.k)
    throw std::out_of_range("hankel_gap: need 1 <= d <= k");
  const Index L = std::max<Index>(tail_length(sys, tail_tol), Index(d) + 1);
  Matrix diff = dense_hankel(markov_blocks(sys, 2 * L - 1), L, sys.r, sys.m);
  const HankelBlock Hd = hankel_from_markov(G_hat, d);
  diff.topLeftCorner(Hd.M.rows(), Hd.M.cols()) -= Hd.M;
  return spectral_norm(diff);
}

}  // namespace sysid
