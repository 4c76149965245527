#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Dense>

namespace stochcone {

/// Joint weights over two finite supports; rows index the first measure's
/// atoms, columns the second's.
struct Coupling {
  Eigen::MatrixXd weights;

  std::size_t rows() const { return static_cast<std::size_t>(weights.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(weights.cols()); }

  /// Largest absolute deviation of row/column sums from the given marginals.
  double marginal_error(std::span<const double> row_marginal, std::span<const double> col_marginal) const;
  bool has_marginals(std::span<const double> row_marginal, std::span<const double> col_marginal,
                     double tol = 1e-9) const {
    return marginal_error(row_marginal, col_marginal) <= tol;
  }
};

}  // namespace stochcone
