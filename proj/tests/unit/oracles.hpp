#pragma once

// Test-only reference implementations. They share no code path with the
// library routines they check.

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "stochcone/order.hpp"

namespace stochcone::testing {

/// Every subset of {0..n-1} closed under the relation, as bitmasks in
/// increasing numeric order (raw 2^n filter).
inline std::vector<std::uint32_t> upper_sets_by_filter(const PointRelation& rel) {
  const std::size_t n = rel.size();
  std::vector<std::uint32_t> out;
  for (std::uint32_t s = 0; s < (std::uint32_t{1} << n); ++s) {
    bool closed = true;
    for (std::size_t i = 0; i < n && closed; ++i) {
      if (!(s >> i & 1U)) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (rel.leq(i, j) && !(s >> j & 1U)) {
          closed = false;
          break;
        }
      }
    }
    if (closed) out.push_back(s);
  }
  return out;
}

inline std::uint32_t to_mask(const UpperSet& u) {
  std::uint32_t m = 0;
  for (std::size_t i : u.members) m |= std::uint32_t{1} << i;
  return m;
}

/// Minimum of sum c_ij x_ij over all basic feasible solutions of the
/// transportation polytope, found by enumerating every (m + n - 1)-cell
/// subset, keeping those that form a spanning tree of the bipartite
/// row/column graph and solving the tree by leaf elimination.
inline double transport_by_vertex_enumeration(const std::vector<double>& supply, const std::vector<double>& demand,
                                              const Eigen::MatrixXd& cost) {
  const std::size_t m = supply.size();
  const std::size_t n = demand.size();
  const std::size_t cells = m * n;
  const std::size_t need = m + n - 1;
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t s = 0; s < (std::uint32_t{1} << cells); ++s) {
    if (static_cast<std::size_t>(__builtin_popcount(s)) != need) continue;
    std::vector<bool> in(cells);
    for (std::size_t c = 0; c < cells; ++c) in[c] = s >> c & 1U;
    std::vector<double> rs = supply;
    std::vector<double> cd = demand;
    std::vector<bool> row_done(m, false), col_done(n, false), used(cells, false);
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    bool ok = true;
    for (std::size_t step = 0; step < need && ok; ++step) {
      bool progressed = false;
      // A row or column with exactly one unused cell is a leaf.
      for (std::size_t i = 0; i < m && !progressed; ++i) {
        if (row_done[i]) continue;
        std::size_t cnt = 0, last = 0;
        for (std::size_t j = 0; j < n; ++j) {
          if (in[i * n + j] && !used[i * n + j]) ++cnt, last = j;
        }
        if (cnt == 1) {
          x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(last)) = rs[i];
          cd[last] -= rs[i];
          used[i * n + last] = true;
          row_done[i] = true;
          progressed = true;
        }
      }
      for (std::size_t j = 0; j < n && !progressed; ++j) {
        if (col_done[j]) continue;
        std::size_t cnt = 0, last = 0;
        for (std::size_t i = 0; i < m; ++i) {
          if (in[i * n + j] && !used[i * n + j]) ++cnt, last = i;
        }
        if (cnt == 1) {
          x(static_cast<Eigen::Index>(last), static_cast<Eigen::Index>(j)) = cd[j];
          rs[last] -= cd[j];
          used[last * n + j] = true;
          col_done[j] = true;
          progressed = true;
        }
      }
      ok = progressed;
    }
    if (!ok) continue;  // contains a cycle, not a basis
    if (x.minCoeff() < -1e-12) continue;
    bool feasible = true;
    for (std::size_t i = 0; i < m; ++i) feasible &= std::abs(x.row(static_cast<Eigen::Index>(i)).sum() - supply[i]) < 1e-9;
    for (std::size_t j = 0; j < n; ++j) feasible &= std::abs(x.col(static_cast<Eigen::Index>(j)).sum() - demand[j]) < 1e-9;
    if (!feasible) continue;
    best = std::min(best, (x.array() * cost.array()).sum());
  }
  return best;
}

}  // namespace stochcone::testing
