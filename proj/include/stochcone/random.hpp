#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "stochcone/cone.hpp"

namespace stochcone {

/// Seedable, reproducible generator.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Conversions to doubles are done here rather than through
/// <random> distributions (whose algorithms are implementation-defined):
///   uniform()  = (next() >> 11) * 2^-53, in [0, 1)
///   normal()   = Box-Muller cosine branch on two uniforms, no caching
///   index(n)   = min(floor(uniform() * n), n - 1)
/// Independent streams come from split(k), which reseeds with the SplitMix64
/// finalizer of (seed, k).
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next() { return engine_(); }
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  std::size_t index(std::size_t n);

  Rng split(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// exp(S) with S symmetric, off-diagonal and diagonal entries N(0, spread^2).
PosDefMatrix random_posdef(std::size_t d, Rng& rng, double spread = 0.5);

/// G G^T with G a d x rank standard Gaussian matrix, scaled by `scale`.
SymMatrix random_psd(std::size_t d, Rng& rng, std::size_t rank, double scale = 1.0);

/// Random symmetric matrix with N(0, 1) entries.
SymMatrix random_symmetric(std::size_t d, Rng& rng);

}  // namespace stochcone
