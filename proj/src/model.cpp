#include "sysid/model.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <string>

namespace sysid {

namespace {

Matrix sample_entries(RngStream& rng, Index rows, Index cols,
                      EntryDistribution dist) {
  return dist == EntryDistribution::Uniform11
             ? rng.uniform_matrix(rows, cols, -1.0, 1.0)
             : rng.normal_matrix(rows, cols);
}

void check_target_norm(double target_norm) {
  if (!(target_norm > 0.0 && target_norm < 1.0))
    throw ConfigError("target_norm must lie in (0,1), got " +
                      std::to_string(target_norm));
}

}  // namespace

double spectral_norm(const Matrix& M) {
  if (!M.allFinite()) throw InputError("spectral_norm: non-finite entries");
  if (M.size() == 0) return 0.0;
  if (M.cwiseAbs().maxCoeff() == 0.0) return 0.0;

  // Deterministic pseudo-random start so the iterate overlaps the leading
  // singular direction almost surely.
  RngStream rng(0x5eed5eed5eed5eedULL);
  Vector v = rng.normal_vector(M.cols()).normalized();
  double sigma = 0.0;
  int stable_hits = 0;
  for (int it = 0; it < 20000; ++it) {
    Vector z = M.transpose() * (M * v);
    const double zn = z.norm();
    if (zn == 0.0) {
      v = rng.normal_vector(M.cols()).normalized();  // landed in the kernel
      continue;
    }
    v = z / zn;
    const double s = (M * v).norm();
    if (std::abs(s - sigma) <=
        1e-13 * std::max(s, std::numeric_limits<double>::min())) {
      if (++stable_hits >= 3) return s;
    } else {
      stable_hits = 0;
    }
    sigma = s;
  }
  // Clustered leading pair: fall back to a full decomposition.
  Eigen::BDCSVD<Matrix> svd(M);
  return svd.singularValues()(0);
}

SystemRealization gen_nilpotent_system(int n, int m, int r, int k,
                                       double target_norm, RngStream& rng,
                                       EntryDistribution dist) {
  if (k < 1) throw ConfigError("gen_nilpotent_system: k must be >= 1");
  if (n <= 2 * k - 1)
    throw ConfigError(
        "gen_nilpotent_system: need n > 2k-1 so every length-(2k-1) path "
        "crosses a zeroed link (n=" +
        std::to_string(n) + ", k=" + std::to_string(k) + ")");
  check_target_norm(target_norm);
  if (m < 1 || r < 1) throw ConfigError("gen_nilpotent_system: m, r >= 1");

  Matrix A = Matrix::Zero(n, n);
  const int period = 2 * k - 1;
  for (int i = 1; i <= n - 1; ++i)
    if (i % period != 0) A(i - 1, i) = static_cast<double>(i);

  // Weighted shift: the spectral norm is the largest retained weight.
  const double shift_norm = spectral_norm(A);
  if (shift_norm > 0.0) A *= target_norm / shift_norm;  // k = 1 leaves A = 0

  SystemRealization sys;
  sys.A = std::move(A);
  sys.B = sample_entries(rng, n, m, dist);
  sys.C = sample_entries(rng, r, n, dist);
  sys.D = sample_entries(rng, r, m, dist);
  sys.n = n;
  sys.m = m;
  sys.r = r;
  return sys;
}

SystemRealization gen_general_system(int n, int m, int r, double target_norm,
                                     RngStream& rng, EntryDistribution dist) {
  if (n < 1 || m < 1 || r < 1)
    throw ConfigError("gen_general_system: n, m, r >= 1");
  check_target_norm(target_norm);

  Matrix A;
  do {
    A = rng.uniform_matrix(n, n, -1.0, 1.0);
  } while (A.cwiseAbs().maxCoeff() == 0.0);  // probability-zero resample guard
  A *= target_norm / spectral_norm(A);

  SystemRealization sys;
  sys.A = std::move(A);
  sys.B = sample_entries(rng, n, m, dist);
  sys.C = sample_entries(rng, r, n, dist);
  sys.D = sample_entries(rng, r, m, dist);
  sys.n = n;
  sys.m = m;
  sys.r = r;
  return sys;
}

MarkovMatrix markov_parameters(const SystemRealization& sys, int k) {
  if (k < 1) throw InputError("markov_parameters: k must be >= 1");
  MarkovMatrix out;
  out.k = k;
  out.m = sys.m;
  out.r = sys.r;
  out.G.resize(sys.r, Index(2) * k * sys.m);
  out.G.leftCols(sys.m) = sys.D;
  Matrix CA = sys.C;  // rolls through C A^j
  for (int j = 0; j <= 2 * k - 2; ++j) {
    out.G.middleCols(Index(j + 1) * sys.m, sys.m) = CA * sys.B;
    if (j < 2 * k - 2) CA *= sys.A;
  }
  return out;
}

HankelBlock hankel_of_system(const SystemRealization& sys, int alpha,
                             int beta) {
  if (alpha < 0 || beta < 1)
    throw InputError("hankel_of_system: need alpha >= 0, beta >= 1");
  Matrix CA = sys.C;
  for (int j = 0; j < alpha; ++j) CA *= sys.A;

  // All distinct blocks C A^{alpha+l} B for l = 0..2beta-2.
  std::vector<Matrix> blocks;
  blocks.reserve(2 * beta - 1);
  for (int l = 0; l <= 2 * beta - 2; ++l) {
    blocks.push_back(CA * sys.B);
    if (l < 2 * beta - 2) CA *= sys.A;
  }

  HankelBlock H;
  H.alpha = alpha;
  H.beta = beta;
  H.r = sys.r;
  H.m = sys.m;
  H.M.resize(Index(sys.r) * beta, Index(sys.m) * beta);
  for (int i = 1; i <= beta; ++i)
    for (int j = 1; j <= beta; ++j)
      H.M.block(Index(i - 1) * sys.r, Index(j - 1) * sys.m, sys.r, sys.m) =
          blocks[i + j - 2];
  return H;
}

HankelBlock hankel_from_markov(const MarkovMatrix& G, int d) {
  if (d < 1) throw std::out_of_range("hankel_from_markov: d must be >= 1");
  if (d > G.k)
    throw std::out_of_range("hankel_from_markov: d > k (blocks up to CA^{2d-2}B missing)");
  HankelBlock H;
  H.alpha = 0;
  H.beta = d;
  H.r = G.r;
  H.m = G.m;
  H.M.resize(Index(G.r) * d, Index(G.m) * d);
  for (int i = 1; i <= d; ++i)
    for (int j = 1; j <= d; ++j)
      H.M.block(Index(i - 1) * G.r, Index(j - 1) * G.m, G.r, G.m) =
          G.block(i + j - 1);
  return H;
}

HankelBlock zero_pad_truncate(const HankelBlock& H, Index rows, Index cols) {
  if (rows < 1 || cols < 1)
    throw InputError("zero_pad_truncate: rows, cols must be >= 1");
  HankelBlock out = H;
  out.M = Matrix::Zero(rows, cols);
  const Index cr = std::min(rows, H.M.rows());
  const Index cc = std::min(cols, H.M.cols());
  out.M.topLeftCorner(cr, cc) = H.M.topLeftCorner(cr, cc);
  return out;
}

}  // namespace sysid
