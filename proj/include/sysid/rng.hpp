#ifndef SYSID_RNG_HPP
#define SYSID_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

#include "sysid/types.hpp"

namespace sysid {

// splitmix64 finalizer; used to derive stream seeds from (seed, label, index).
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_label(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Deterministic random stream. Uniform and Gaussian draws are built directly
// on the raw mt19937_64 output so sequences do not depend on standard-library
// distribution internals.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : eng_(seed) {}

  // [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  // Box-Muller with a cached spare.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform01();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    spare_ = rad * std::sin(ang);
    have_spare_ = true;
    return rad * std::cos(ang);
  }

  Vector normal_vector(Index n, double sigma = 1.0) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = sigma * normal();
    return v;
  }

  Matrix normal_matrix(Index rows, Index cols, double sigma = 1.0) {
    Matrix out(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) out(i, j) = sigma * normal();
    return out;
  }

  Matrix uniform_matrix(Index rows, Index cols, double lo, double hi) {
    Matrix out(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) out(i, j) = uniform(lo, hi);
    return out;
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Named sub-stream of a master seed. Equal (seed, label, index) triples give
// identical streams; distinct labels decouple variance sources.
inline RngStream derive_stream(std::uint64_t master, std::string_view label,
                               std::uint64_t index = 0) {
  return RngStream(mix64(mix64(master ^ hash_label(label)) + index));
}

inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                                 std::uint64_t index = 0) {
  return mix64(mix64(master ^ hash_label(label)) + index);
}

}  // namespace sysid

#endif
