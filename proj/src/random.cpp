#include "stochcone/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace stochcone {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t Rng::index(std::size_t n) {
  const auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
  return std::min(i, n - 1);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Rng Rng::split(std::uint64_t stream) const { return Rng(mix_seed(seed_, stream)); }

SymMatrix random_symmetric(std::size_t d, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) a(i, j) = a(j, i) = rng.normal();
  }
  return SymMatrix(a);
}

PosDefMatrix random_posdef(std::size_t d, Rng& rng, double spread) {
  return PosDefMatrix(matrix_fn(random_symmetric(d, rng) * spread, MatrixFunction::exp()));
}

SymMatrix random_psd(std::size_t d, Rng& rng, std::size_t rank, double scale) {
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd g(n, static_cast<Eigen::Index>(rank));
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = rng.normal();
  }
  return SymMatrix(scale * g * g.transpose());
}

}  // namespace stochcone
