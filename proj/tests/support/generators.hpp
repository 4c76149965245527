#pragma once

// Random instance generators shared by the unit and acceptance suites.

#include <utility>
#include <vector>

#include "stochcone/measure.hpp"
#include "stochcone/random.hpp"

namespace stochcone::testing {

/// mu random; nu moves each mu atom up by its own PSD offset, optionally
/// splitting it into two atoms with different offsets. mu <= nu by
/// construction (the split coupling is supported on the order).
inline std::pair<FinMeasure, FinMeasure> dominated_pair(std::size_t d, std::size_t atoms, Rng& rng,
                                                        double offset_scale = 0.5) {
  const FinMeasure mu = random_measure(d, atoms, rng);
  std::vector<std::pair<PosDefMatrix, double>> up;
  for (const auto& a : mu.atoms()) {
    const bool split = rng.uniform() < 0.3;
    const double frac = split ? rng.uniform(0.2, 0.8) : 1.0;
    up.emplace_back(translate(a.point, random_psd(d, rng, 1 + rng.index(d), offset_scale)), a.weight * frac);
    if (split) {
      up.emplace_back(translate(a.point, random_psd(d, rng, 1 + rng.index(d), offset_scale)), a.weight * (1 - frac));
    }
  }
  return {mu, FinMeasure::from_atoms(up)};
}

/// Measure whose atoms are drawn from a fixed short list of points, so that
/// many pairs of atoms are comparable.
inline FinMeasure measure_on(const std::vector<PosDefMatrix>& pool, std::size_t atoms, Rng& rng) {
  std::vector<std::pair<PosDefMatrix, double>> pairs;
  for (std::size_t i = 0; i < atoms; ++i) pairs.emplace_back(pool[rng.index(pool.size())], rng.uniform(0.1, 1.0));
  return FinMeasure::from_atoms(pairs);
}

/// Points forming a mix of chains and incomparable elements.
inline std::vector<PosDefMatrix> order_pool(std::size_t d, Rng& rng, std::size_t size) {
  std::vector<PosDefMatrix> pool;
  const PosDefMatrix base = random_posdef(d, rng);
  pool.push_back(base);
  while (pool.size() < size) {
    const PosDefMatrix& from = pool[rng.index(pool.size())];
    if (rng.uniform() < 0.6) {
      pool.push_back(translate(from, random_psd(d, rng, 1 + rng.index(d), 0.3)));
    } else {
      pool.push_back(random_posdef(d, rng));
    }
  }
  return pool;
}

/// One of four instance families: independent random measures, a dominated
/// pair, a dominated pair with a reweighted nu, or two measures on a shared
/// partially ordered pool.
inline std::pair<FinMeasure, FinMeasure> mixed_instance(std::size_t d, std::size_t max_atoms, Rng& rng) {
  const std::size_t m = 1 + rng.index(max_atoms);
  const std::size_t n = 1 + rng.index(max_atoms);
  switch (rng.index(4)) {
    case 0:
      return {random_measure(d, m, rng, 0.3), random_measure(d, n, rng, 0.3)};
    case 1:
      return dominated_pair(d, std::min<std::size_t>(m, (max_atoms + 1) / 2), rng);
    case 2: {
      auto [mu, nu] = dominated_pair(d, std::min<std::size_t>(m, (max_atoms + 1) / 2), rng);
      std::vector<std::pair<PosDefMatrix, double>> re;
      for (const auto& a : nu.atoms()) re.emplace_back(a.point, a.weight * rng.uniform(0.5, 1.5));
      return {mu, FinMeasure::from_atoms(re)};
    }
    default: {
      const auto pool = order_pool(d, rng, 6);
      return {measure_on(pool, m, rng), measure_on(pool, n, rng)};
    }
  }
}

}  // namespace stochcone::testing
