#include "stochcone/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <vector>

#include "stochcone/error.hpp"
#include "stochcone/flow.hpp"
#include "stochcone/order.hpp"

namespace stochcone {

namespace {

using Index = Eigen::Index;

struct Cell {
  std::size_t row;
  std::size_t col;
};

void require_same_dim(const FinMeasure& mu, const FinMeasure& nu) {
  if (mu.dim() != nu.dim()) {
    throw DimensionError("transport: measures have dimensions " + std::to_string(mu.dim()) + " and " +
                         std::to_string(nu.dim()));
  }
}

// Basis as a spanning tree on rows 0..m-1 and columns m..m+n-1.
class BasisTree {
 public:
  BasisTree(std::size_t m, std::size_t n) : m_(m), n_(n), basic_(m, std::vector<bool>(n, false)) {}

  void set(std::size_t i, std::size_t j, bool on) { basic_[i][j] = on; }
  bool basic(std::size_t i, std::size_t j) const { return basic_[i][j]; }

  void potentials(const Eigen::MatrixXd& c, Eigen::VectorXd& u, Eigen::VectorXd& v) const {
    u.setZero(static_cast<Index>(m_));
    v.setZero(static_cast<Index>(n_));
    std::vector<bool> seen(m_ + n_, false);
    std::queue<std::size_t> q;
    seen[0] = true;
    q.push(0);
    while (!q.empty()) {
      const std::size_t node = q.front();
      q.pop();
      if (node < m_) {
        for (std::size_t j = 0; j < n_; ++j) {
          if (basic_[node][j] && !seen[m_ + j]) {
            v(static_cast<Index>(j)) = c(static_cast<Index>(node), static_cast<Index>(j)) - u(static_cast<Index>(node));
            seen[m_ + j] = true;
            q.push(m_ + j);
          }
        }
      } else {
        const std::size_t j = node - m_;
        for (std::size_t i = 0; i < m_; ++i) {
          if (basic_[i][j] && !seen[i]) {
            u(static_cast<Index>(i)) = c(static_cast<Index>(i), static_cast<Index>(j)) - v(static_cast<Index>(j));
            seen[i] = true;
            q.push(i);
          }
        }
      }
    }
  }

  // Tree path from column node j to row node i, as cells in walk order.
  std::vector<Cell> path(std::size_t col, std::size_t row) const {
    const std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> parent(m_ + n_, none);
    std::queue<std::size_t> q;
    parent[row] = row;
    q.push(row);
    while (!q.empty()) {
      const std::size_t node = q.front();
      q.pop();
      if (node < m_) {
        for (std::size_t j = 0; j < n_; ++j) {
          if (basic_[node][j] && parent[m_ + j] == none) {
            parent[m_ + j] = node;
            q.push(m_ + j);
          }
        }
      } else {
        for (std::size_t i = 0; i < m_; ++i) {
          if (basic_[i][node - m_] && parent[i] == none) {
            parent[i] = node;
            q.push(i);
          }
        }
      }
    }
    std::vector<Cell> cells;
    std::size_t node = m_ + col;
    while (node != row) {
      const std::size_t up = parent[node];
      if (up == none) throw Error("transport: basis is not a spanning tree");
      cells.push_back(node < m_ ? Cell{node, up - m_} : Cell{up, node - m_});
      node = up;
    }
    return cells;
  }

 private:
  std::size_t m_;
  std::size_t n_;
  std::vector<std::vector<bool>> basic_;
};

}  // namespace

double TransportSolution::min_reduced_cost(const Eigen::MatrixXd& costs) const {
  double best = 0.0;
  bool first = true;
  for (Index i = 0; i < costs.rows(); ++i) {
    for (Index j = 0; j < costs.cols(); ++j) {
      const double r = costs(i, j) - u(i) - v(j);
      best = first ? r : std::min(best, r);
      first = false;
    }
  }
  return best;
}

TransportSolution solve_transport(std::span<const double> supply, std::span<const double> demand,
                                  const Eigen::MatrixXd& costs) {
  const std::size_t m = supply.size();
  const std::size_t n = demand.size();
  if (m == 0 || n == 0) throw InputError("transport: empty supply or demand");
  if (static_cast<std::size_t>(costs.rows()) != m || static_cast<std::size_t>(costs.cols()) != n) {
    throw DimensionError("transport: cost matrix shape does not match supply/demand");
  }
  if (!costs.allFinite()) throw DomainError("transport: costs must be finite");
  auto valid = [](double w) { return std::isfinite(w) && w >= 0.0; };
  if (!std::all_of(supply.begin(), supply.end(), valid) || !std::all_of(demand.begin(), demand.end(), valid)) {
    throw InputError("transport: supplies and demands must be finite and nonnegative");
  }
  const double total_s = std::accumulate(supply.begin(), supply.end(), 0.0);
  const double total_d = std::accumulate(demand.begin(), demand.end(), 0.0);
  if (!(total_s > 0.0) || !(total_d > 0.0)) throw InputError("transport: totals must be positive");

  std::vector<double> s(supply.begin(), supply.end());
  std::vector<double> d(demand.begin(), demand.end());
  for (double& x : d) x *= total_s / total_d;

  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(static_cast<Index>(m), static_cast<Index>(n));
  BasisTree tree(m, n);

  // North-west corner: every step advances exactly one of (i, j), which
  // yields m + n - 1 basic cells forming a tree even when degenerate.
  {
    std::size_t i = 0;
    std::size_t j = 0;
    double rs = s[0];
    double cd = d[0];
    for (;;) {
      const double amt = std::min(rs, cd);
      x(static_cast<Index>(i), static_cast<Index>(j)) = amt;
      tree.set(i, j, true);
      rs -= amt;
      cd -= amt;
      if (i == m - 1 && j == n - 1) break;
      if (i == m - 1 || (j != n - 1 && rs > cd)) {
        ++j;
        cd += d[j];
      } else {
        ++i;
        rs += s[i];
      }
    }
  }

  const double eps = 1e-12 * (1.0 + costs.cwiseAbs().maxCoeff());
  const std::size_t max_pivots = 1000 + 50 * m * n * (m + n);
  TransportSolution sol;
  for (;;) {
    tree.potentials(costs, sol.u, sol.v);
    bool found = false;
    Cell enter{0, 0};
    for (std::size_t i = 0; i < m && !found; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (tree.basic(i, j)) continue;
        const double r = costs(static_cast<Index>(i), static_cast<Index>(j)) - sol.u(static_cast<Index>(i)) -
                         sol.v(static_cast<Index>(j));
        if (r < -eps) {
          enter = {i, j};
          found = true;
          break;
        }
      }
    }
    if (!found) break;
    if (++sol.pivots > max_pivots) {
      throw ConvergenceError("transport simplex exceeded its pivot cap", 0.0);
    }
    // Cycle: entering cell (+), then path cells alternate -, +, -, ...
    const std::vector<Cell> cycle = tree.path(enter.col, enter.row);
    double theta = 0.0;
    std::size_t leave = cycle.size();
    for (std::size_t k = 0; k < cycle.size(); k += 2) {
      const Cell& c = cycle[k];
      const double val = x(static_cast<Index>(c.row), static_cast<Index>(c.col));
      const bool better = leave == cycle.size() || val < theta ||
                          (val == theta && c.row * n + c.col < cycle[leave].row * n + cycle[leave].col);
      if (better) {
        theta = val;
        leave = k;
      }
    }
    x(static_cast<Index>(enter.row), static_cast<Index>(enter.col)) += theta;
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      const Cell& c = cycle[k];
      double& val = x(static_cast<Index>(c.row), static_cast<Index>(c.col));
      val += (k % 2 == 0) ? -theta : theta;
    }
    const Cell& out = cycle[leave];
    x(static_cast<Index>(out.row), static_cast<Index>(out.col)) = 0.0;
    tree.set(out.row, out.col, false);
    tree.set(enter.row, enter.col, true);
  }
  x = x.cwiseMax(0.0);
  sol.plan = Coupling{x};
  sol.cost = (x.array() * costs.array()).sum();
  return sol;
}

Eigen::MatrixXd thompson_costs(const FinMeasure& mu, const FinMeasure& nu) {
  require_same_dim(mu, nu);
  Eigen::MatrixXd c(static_cast<Index>(mu.size()), static_cast<Index>(nu.size()));
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) {
      c(static_cast<Index>(i), static_cast<Index>(j)) = thompson_distance(mu[i].point, nu[j].point);
    }
  }
  return c;
}

Eigen::MatrixXd cost_matrix(const FinMeasure& mu, const FinMeasure& nu, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InputError("Wasserstein order p must be finite and >= 1");
  Eigen::MatrixXd c = thompson_costs(mu, nu);
  if (p == 1.0) return c;
  if (p == 2.0) return c.cwiseProduct(c);
  return c.array().pow(p).matrix();
}

WassersteinResult wasserstein(const FinMeasure& mu, const FinMeasure& nu, double p) {
  const Eigen::MatrixXd c = cost_matrix(mu, nu, p);
  const auto mw = mu.weights();
  const auto nw = nu.weights();
  TransportSolution sol = solve_transport(mw, nw, c);
  const double total = std::max(sol.cost, 0.0);
  double dist = total;
  if (p == 2.0) {
    dist = std::sqrt(total);
  } else if (p != 1.0) {
    dist = std::pow(total, 1.0 / p);
  }
  return {dist, std::move(sol.plan), total};
}

WassersteinResult wasserstein_inf(const FinMeasure& mu, const FinMeasure& nu) {
  const Eigen::MatrixXd dist = thompson_costs(mu, nu);
  std::vector<double> levels(dist.data(), dist.data() + dist.size());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  const auto mq = quantize_weights(mu.weights(), kMassScale);
  const auto nq = quantize_weights(nu.weights(), kMassScale);
  const std::size_t m = mu.size();
  const std::size_t n = nu.size();

  auto attempt = [&](double threshold, Coupling* plan) {
    MaxFlow net(m + n + 2);
    const std::size_t sink = m + n + 1;
    for (std::size_t a = 0; a < m; ++a) net.add_edge(0, 1 + a, mq[a]);
    std::vector<std::pair<Cell, std::size_t>> middle;
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (dist(static_cast<Index>(a), static_cast<Index>(b)) <= threshold) {
          middle.push_back({{a, b}, net.add_edge(1 + a, 1 + m + b, kMassScale)});
        }
      }
    }
    for (std::size_t b = 0; b < n; ++b) net.add_edge(1 + m + b, sink, nq[b]);
    const bool feasible = net.run(0, sink) == kMassScale;
    if (feasible && plan != nullptr) {
      plan->weights = Eigen::MatrixXd::Zero(static_cast<Index>(m), static_cast<Index>(n));
      for (const auto& [cell, id] : middle) {
        plan->weights(static_cast<Index>(cell.row), static_cast<Index>(cell.col)) =
            static_cast<double>(net.flow(id)) / static_cast<double>(kMassScale);
      }
    }
    return feasible;
  };

  std::size_t lo = 0;
  std::size_t hi = levels.size() - 1;  // always feasible
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (attempt(levels[mid], nullptr)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  Coupling plan;
  attempt(levels[lo], &plan);
  // Report the largest distance actually carrying mass.
  double bottleneck = 0.0;
  for (Index i = 0; i < plan.weights.rows(); ++i) {
    for (Index j = 0; j < plan.weights.cols(); ++j) {
      if (plan.weights(i, j) > 0.0) bottleneck = std::max(bottleneck, dist(i, j));
    }
  }
  return {bottleneck, std::move(plan), bottleneck};
}

double product_metric_distance(std::span<const PosDefMatrix> a, std::span<const PosDefMatrix> b,
                               ProductMetric mode) {
  if (a.size() != b.size()) throw DimensionError("product metric: tuples have different lengths");
  if (a.empty()) throw InputError("product metric: empty tuples");
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = thompson_distance(a[j], b[j]);
    acc = mode == ProductMetric::kMean ? acc + d : std::max(acc, d);
  }
  return mode == ProductMetric::kMean ? acc / static_cast<double>(a.size()) : acc;
}

}  // namespace stochcone
