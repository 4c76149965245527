#include "stochcone/cone.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stochcone/error.hpp"

namespace stochcone {

namespace {

void require_same_dim(const SymMatrix& x, const SymMatrix& y, const char* op) {
  if (x.dim() != y.dim()) {
    throw DimensionError(std::string(op) + ": dimension mismatch (" + std::to_string(x.dim()) +
                         " vs " + std::to_string(y.dim()) + ")");
  }
}

// Spectrum of y^{-1/2} x y^{-1/2}.
SpectralDecomposition relative_spectrum(const PosDefMatrix& x, const PosDefMatrix& y) {
  require_same_dim(x.sym(), y.sym(), "relative spectrum");
  const SymMatrix y_inv_sqrt = matrix_fn(y.sym(), MatrixFunction::inv_sqrt());
  return eigh(congruence(x.sym(), y_inv_sqrt));
}

}  // namespace

PosDefMatrix::PosDefMatrix(SymMatrix m, double pd_floor) : m_(std::move(m)) {
  const double lo = eigh(m_).min_eigenvalue();
  if (!(lo > pd_floor)) {
    std::ostringstream os;
    os.precision(17);
    os << "matrix is not positive definite: min eigenvalue " << lo << " <= floor " << pd_floor;
    throw DomainError(os.str());
  }
}

PosDefMatrix PosDefMatrix::inverse() const {
  return PosDefMatrix(matrix_fn(m_, MatrixFunction::inv()), 0.0);
}

PosDefMatrix PosDefMatrix::scaled(double c) const {
  if (!(c > 0.0)) throw DomainError("PosDefMatrix::scaled requires c > 0");
  return PosDefMatrix(m_ * c, 0.0);
}

OrderTolerance::OrderTolerance(double e) : eps(e) {
  if (!(e >= 0.0)) throw InputError("order tolerance must be nonnegative");
}

bool loewner_leq(const SymMatrix& x, const SymMatrix& y, OrderTolerance tol) {
  require_same_dim(x, y, "loewner_leq");
  const SymMatrix diff = y - x;
  const double norm = diff.frobenius_norm();
  if (norm == 0.0) return true;
  return eigh(diff).min_eigenvalue() >= -tol.eps * (1.0 + norm);
}

bool loewner_leq(const PosDefMatrix& x, const PosDefMatrix& y, OrderTolerance tol) {
  return loewner_leq(x.sym(), y.sym(), tol);
}

Ordering order_compare(const PosDefMatrix& x, const PosDefMatrix& y, OrderTolerance tol) {
  const bool le = loewner_leq(x, y, tol);
  const bool ge = loewner_leq(y, x, tol);
  if (le && ge) return Ordering::kEqual;
  if (le) return Ordering::kLess;
  if (ge) return Ordering::kGreater;
  return Ordering::kIncomparable;
}

double gauge(const PosDefMatrix& x, const PosDefMatrix& y) {
  return relative_spectrum(x, y).max_eigenvalue();
}

double thompson_distance(const PosDefMatrix& x, const PosDefMatrix& y) {
  require_same_dim(x.sym(), y.sym(), "thompson_distance");
  if (x == y) return 0.0;
  // M(y/x) = 1 / lambda_min(y^{-1/2} x y^{-1/2}), so one spectrum gives the
  // distance. Both orientations are evaluated and the smaller kept, which
  // makes the result exactly symmetric and exact when one side is the identity.
  auto one_sided = [](const PosDefMatrix& a, const PosDefMatrix& b) {
    const SpectralDecomposition s = relative_spectrum(a, b);
    return std::max({std::log(s.max_eigenvalue()), -std::log(s.min_eigenvalue()), 0.0});
  };
  return std::min(one_sided(x, y), one_sided(y, x));
}

PosDefMatrix translate(const PosDefMatrix& x, const SymMatrix& a, OrderTolerance tol) {
  require_same_dim(x.sym(), a, "translate");
  if (!loewner_leq(SymMatrix::zero(a.dim()), a, tol)) {
    throw DomainError("translate: offset is not positive semidefinite");
  }
  return PosDefMatrix(x.sym() + a);
}

bool order_interval_contains(const PosDefMatrix& lo, const PosDefMatrix& hi, const PosDefMatrix& w,
                             OrderTolerance tol) {
  if (!loewner_leq(lo, hi, tol)) {
    throw DomainError("order_interval_contains: lower end does not precede upper end");
  }
  return loewner_leq(lo, w, tol) && loewner_leq(w, hi, tol);
}

PosDefMatrix dominating_transport(const PosDefMatrix& x, const PosDefMatrix& y,
                                  const PosDefMatrix& x1, OrderTolerance tol) {
  if (!loewner_leq(x, y, tol)) throw DomainError("dominating_transport requires x <= y");
  if (x == y) return x1;
  const SymMatrix gap = y.sym() - x.sym();
  return PosDefMatrix(x1.sym() + gap, 0.0);
}

PosDefMatrix dominating_scaling(const PosDefMatrix& x, const PosDefMatrix& y,
                                const PosDefMatrix& x1, OrderTolerance tol) {
  if (!loewner_leq(x, y, tol)) throw DomainError("dominating_scaling requires x <= y");
  return y.scaled(std::exp(thompson_distance(x, x1)));
}

double spectral_norm(const SymMatrix& a) {
  const SpectralDecomposition s = eigh(a);
  return std::max(std::abs(s.min_eigenvalue()), std::abs(s.max_eigenvalue()));
}

}  // namespace stochcone
