#include "stochcone/coupling.hpp"

#include <algorithm>
#include <cmath>

#include "stochcone/error.hpp"

namespace stochcone {

double Coupling::marginal_error(std::span<const double> row_marginal,
                                std::span<const double> col_marginal) const {
  if (row_marginal.size() != rows() || col_marginal.size() != cols()) {
    throw DimensionError("coupling shape does not match the marginals");
  }
  double err = 0.0;
  for (std::size_t i = 0; i < rows(); ++i) {
    err = std::max(err, std::abs(weights.row(static_cast<Eigen::Index>(i)).sum() - row_marginal[i]));
  }
  for (std::size_t j = 0; j < cols(); ++j) {
    err = std::max(err, std::abs(weights.col(static_cast<Eigen::Index>(j)).sum() - col_marginal[j]));
  }
  return err;
}

}  // namespace stochcone
