#ifndef SYSID_MODEL_HPP
#define SYSID_MODEL_HPP

#include "sysid/errors.hpp"
#include "sysid/rng.hpp"
#include "sysid/types.hpp"

namespace sysid {

// Ground-truth state-space realization
//   x_{t+1} = A x_t + B u_t,   y_t = C x_t + D u_t
// with A (n x n), B (n x m), C (r x n), D (r x m).
struct SystemRealization {
  Matrix A, B, C, D;
  int n = 0, m = 0, r = 0;
};

// G = [D, CB, CAB, ..., CA^{2k-2}B]; width is exactly 2km.
struct MarkovMatrix {
  int k = 0, m = 0, r = 0;
  Matrix G;  // r x 2km

  // block(0) = D, block(j) = C A^{j-1} B for j >= 1.
  Matrix block(int j) const { return G.middleCols(Index(j) * m, m); }
  int block_count() const { return 2 * k; }
};

// (alpha, beta) block-Hankel matrix with block (i, j) = C A^{alpha+i+j-2} B.
// M may be zero-padded or truncated away from the nominal r*beta x m*beta
// shape by zero_pad_truncate.
struct HankelBlock {
  int alpha = 0, beta = 0, r = 0, m = 0;
  Matrix M;
};

enum class EntryDistribution { Uniform11, Gaussian };

// Largest singular value. Power iteration on M^T M (tolerance 1e-12,
// iteration cap) with a dense SVD fallback when the leading pair is too
// clustered to converge.
double spectral_norm(const Matrix& M);

// Weighted-shift A with entry (i, i+1) = i, zeroed where (2k-1) divides i,
// rescaled to the target spectral norm. By construction A^{2k-1} = 0.
// B, C, D entries come from `dist` (default Uniform[-1,1]).
// Requires n > 2k-1 and target_norm in (0,1). k = 1 forces A = 0 and the
// target norm is then unreachable; A is returned unscaled in that case.
SystemRealization gen_nilpotent_system(
    int n, int m, int r, int k, double target_norm, RngStream& rng,
    EntryDistribution dist = EntryDistribution::Uniform11);

// Dense A with iid Uniform[-1,1] entries rescaled to the target spectral
// norm; B, C, D as in gen_nilpotent_system.
SystemRealization gen_general_system(
    int n, int m, int r, double target_norm, RngStream& rng,
    EntryDistribution dist = EntryDistribution::Uniform11);

MarkovMatrix markov_parameters(const SystemRealization& sys, int k);

// H_{alpha,beta} with block (i, j) = C A^{alpha+i+j-2} B, i, j = 1..beta.
HankelBlock hankel_of_system(const SystemRealization& sys, int alpha,
                             int beta);

// H_{0,d} assembled from G's blocks (the D block is skipped). Requires
// d <= k so every needed block C A^j B, j <= 2d-2, exists in G.
HankelBlock hankel_from_markov(const MarkovMatrix& G, int d);

// Leading rows x cols region of the zero-padded extension of H: existing
// entries preserved, new entries zero, smaller targets plain truncation.
HankelBlock zero_pad_truncate(const HankelBlock& H, Index rows, Index cols);

}  // namespace sysid

#endif
