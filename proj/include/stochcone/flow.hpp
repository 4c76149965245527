#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace stochcone {

/// Dinic max-flow on integer capacities.
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t nodes);

  /// Returns an edge id usable with flow().
  std::size_t add_edge(std::size_t from, std::size_t to, std::int64_t capacity);
  std::int64_t run(std::size_t source, std::size_t sink);
  std::int64_t flow(std::size_t edge) const;
  /// Nodes reachable from the source in the residual graph after run();
  /// this is the source side of a minimum cut.
  std::vector<bool> source_side() const;

 private:
  struct Edge {
    std::size_t to;
    std::int64_t cap;
    std::int64_t initial;
  };

  bool build_levels(std::size_t s, std::size_t t);
  std::int64_t push(std::size_t u, std::size_t t, std::int64_t limit);

  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<int> level_;
  std::vector<std::size_t> cursor_;
  std::size_t source_ = 0;
};

/// Integer weights on a grid of 1 / scale summing to exactly `scale`
/// (largest-remainder rounding; ties go to the lower index).
std::vector<std::int64_t> quantize_weights(std::span<const double> weights, std::int64_t scale);

}  // namespace stochcone
