#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "stochcone/coupling.hpp"
#include "stochcone/measure.hpp"

namespace stochcone {

/// Optimal basic solution of a balanced transportation problem together with
/// the dual potentials u (rows) and v (columns) of its final basis.
struct TransportSolution {
  Coupling plan;
  Eigen::VectorXd u;
  Eigen::VectorXd v;
  double cost = 0.0;
  std::size_t pivots = 0;

  /// min over cells of c_ij - u_i - v_j; >= 0 (up to rounding) certifies
  /// optimality together with complementary slackness on the basis.
  double min_reduced_cost(const Eigen::MatrixXd& costs) const;
};

/// Transportation simplex: north-west-corner start, MODI potentials, Bland's
/// lowest-index rule for entering and leaving cells. Demands are rescaled to
/// the supply total.
TransportSolution solve_transport(std::span<const double> supply, std::span<const double> demand,
                                  const Eigen::MatrixXd& costs);

/// d_T(x_i, y_j) for mu atoms x_i (rows) and nu atoms y_j (columns).
Eigen::MatrixXd thompson_costs(const FinMeasure& mu, const FinMeasure& nu);

/// Entrywise d_T^p.
Eigen::MatrixXd cost_matrix(const FinMeasure& mu, const FinMeasure& nu, double p);

struct WassersteinResult {
  double distance;
  Coupling plan;
  /// Sum of c_ij pi_ij (for p = inf, the bottleneck value).
  double cost;
};

/// p-Wasserstein distance under the Thompson metric, 1 <= p < inf.
WassersteinResult wasserstein(const FinMeasure& mu, const FinMeasure& nu, double p);

/// inf over couplings of the largest ground distance on the coupling's
/// support. Binary search over distinct distances with a max-flow
/// feasibility test on the 1e-9 mass grid.
WassersteinResult wasserstein_inf(const FinMeasure& mu, const FinMeasure& nu);

enum class ProductMetric {
  kMean,  // (1/n) sum_j d_T(a_j, b_j)
  kMax,   // max_j d_T(a_j, b_j)
};

double product_metric_distance(std::span<const PosDefMatrix> a, std::span<const PosDefMatrix> b,
                               ProductMetric mode);

}  // namespace stochcone
