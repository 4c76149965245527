#pragma once

#include <cstddef>

#include "stochcone/matfun.hpp"

namespace stochcone {

inline constexpr double kDefaultPdFloor = 1e-12;

/// A point of the open cone of positive-definite matrices.
class PosDefMatrix {
 public:
  /// Throws DomainError unless the minimum eigenvalue exceeds pd_floor.
  explicit PosDefMatrix(SymMatrix m, double pd_floor = kDefaultPdFloor);

  static PosDefMatrix identity(std::size_t d) { return PosDefMatrix(SymMatrix::identity(d)); }
  static PosDefMatrix scalar(std::size_t d, double c) { return PosDefMatrix(SymMatrix::scalar(d, c)); }
  static PosDefMatrix diagonal(std::initializer_list<double> diag) {
    return PosDefMatrix(SymMatrix::diagonal(diag));
  }
  static PosDefMatrix diagonal(std::span<const double> diag) { return PosDefMatrix(SymMatrix::diagonal(diag)); }

  const SymMatrix& sym() const { return m_; }
  const Eigen::MatrixXd& matrix() const { return m_.matrix(); }
  std::size_t dim() const { return m_.dim(); }

  PosDefMatrix inverse() const;
  PosDefMatrix scaled(double c) const;

  bool operator==(const PosDefMatrix& o) const { return m_ == o.m_; }

 private:
  SymMatrix m_;
};

/// Slack for the closed order x <= y  <=>  y - x in the closed cone.
struct OrderTolerance {
  double eps = 1e-10;

  OrderTolerance() = default;
  explicit OrderTolerance(double e);
  static OrderTolerance exact() { return OrderTolerance(0.0); }
};

/// Loewner order on symmetric matrices: min eig(y - x) >= -eps (1 + |y - x|_F).
bool loewner_leq(const SymMatrix& x, const SymMatrix& y, OrderTolerance tol = {});
bool loewner_leq(const PosDefMatrix& x, const PosDefMatrix& y, OrderTolerance tol = {});

enum class Ordering { kLess, kGreater, kEqual, kIncomparable };

/// Total verdict for a pair; mutual <= within tolerance is reported as kEqual.
Ordering order_compare(const PosDefMatrix& x, const PosDefMatrix& y, OrderTolerance tol = {});

/// M(x/y) = inf{l > 0 : x <= l y}, the top eigenvalue of y^{-1/2} x y^{-1/2}.
double gauge(const PosDefMatrix& x, const PosDefMatrix& y);

/// Thompson part metric max{log M(x/y), log M(y/x)}. Exactly 0 for
/// bitwise-identical arguments.
double thompson_distance(const PosDefMatrix& x, const PosDefMatrix& y);

/// x + a for positive semidefinite a (min eigenvalue >= -tol).
PosDefMatrix translate(const PosDefMatrix& x, const SymMatrix& a, OrderTolerance tol = {});

/// lo <= w <= hi. Throws DomainError unless lo <= hi.
bool order_interval_contains(const PosDefMatrix& lo, const PosDefMatrix& hi, const PosDefMatrix& w,
                             OrderTolerance tol = {});

/// Given x <= y and any x1, returns y1 = x1 + (y - x), which dominates x1
/// and satisfies d_T(y, y1) <= d_T(x, x1). Throws DomainError unless x <= y.
PosDefMatrix dominating_transport(const PosDefMatrix& x, const PosDefMatrix& y,
                                  const PosDefMatrix& x1, OrderTolerance tol = {});

/// Scaling variant of the same construction: y1 = e^a y with a = d_T(x, x1).
PosDefMatrix dominating_scaling(const PosDefMatrix& x, const PosDefMatrix& y,
                                const PosDefMatrix& x1, OrderTolerance tol = {});

/// Largest eigenvalue, which is the operator norm on the cone.
double spectral_norm(const SymMatrix& a);

}  // namespace stochcone
