#include "stochcone/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "stochcone/error.hpp"

namespace stochcone {

MaxFlow::MaxFlow(std::size_t nodes) : adj_(nodes), level_(nodes), cursor_(nodes) {}

std::size_t MaxFlow::add_edge(std::size_t from, std::size_t to, std::int64_t capacity) {
  const std::size_t id = edges_.size();
  edges_.push_back({to, capacity, capacity});
  adj_[from].push_back(id);
  edges_.push_back({from, 0, 0});
  adj_[to].push_back(id + 1);
  return id;
}

bool MaxFlow::build_levels(std::size_t s, std::size_t t) {
  std::fill(level_.begin(), level_.end(), -1);
  std::queue<std::size_t> q;
  level_[s] = 0;
  q.push(s);
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop();
    for (std::size_t id : adj_[u]) {
      const Edge& e = edges_[id];
      if (e.cap > 0 && level_[e.to] < 0) {
        level_[e.to] = level_[u] + 1;
        q.push(e.to);
      }
    }
  }
  return level_[t] >= 0;
}

std::int64_t MaxFlow::push(std::size_t u, std::size_t t, std::int64_t limit) {
  if (u == t) return limit;
  for (std::size_t& i = cursor_[u]; i < adj_[u].size(); ++i) {
    const std::size_t id = adj_[u][i];
    Edge& e = edges_[id];
    if (e.cap <= 0 || level_[e.to] != level_[u] + 1) continue;
    const std::int64_t got = push(e.to, t, std::min(limit, e.cap));
    if (got > 0) {
      e.cap -= got;
      edges_[id ^ 1].cap += got;
      return got;
    }
  }
  return 0;
}

std::int64_t MaxFlow::run(std::size_t source, std::size_t sink) {
  source_ = source;
  std::int64_t total = 0;
  while (build_levels(source, sink)) {
    std::fill(cursor_.begin(), cursor_.end(), 0);
    while (const std::int64_t f = push(source, sink, std::numeric_limits<std::int64_t>::max())) {
      total += f;
    }
  }
  return total;
}

std::int64_t MaxFlow::flow(std::size_t edge) const { return edges_[edge].initial - edges_[edge].cap; }

std::vector<bool> MaxFlow::source_side() const {
  std::vector<bool> seen(adj_.size(), false);
  std::queue<std::size_t> q;
  seen[source_] = true;
  q.push(source_);
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop();
    for (std::size_t id : adj_[u]) {
      const Edge& e = edges_[id];
      if (e.cap > 0 && !seen[e.to]) {
        seen[e.to] = true;
        q.push(e.to);
      }
    }
  }
  return seen;
}

std::vector<std::int64_t> quantize_weights(std::span<const double> weights, std::int64_t scale) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw InputError("cannot quantize weights with zero total");
  std::vector<std::int64_t> q(weights.size());
  std::vector<double> remainder(weights.size());
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double exact = weights[i] / total * static_cast<double>(scale);
    q[i] = static_cast<std::int64_t>(std::floor(exact));
    remainder[i] = exact - static_cast<double>(q[i]);
    assigned += q[i];
  }
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  // Floating rounding can leave the floor sum off by more than the count.
  std::int64_t missing = scale - assigned;
  for (std::size_t k = 0; missing != 0 && !order.empty(); k = (k + 1) % order.size()) {
    const std::size_t i = order[k];
    if (missing > 0) {
      ++q[i];
      --missing;
    } else if (q[i] > 0) {
      --q[i];
      ++missing;
    }
  }
  return q;
}

}  // namespace stochcone
