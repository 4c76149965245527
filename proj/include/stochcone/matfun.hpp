#pragma once

#include <cstddef>
#include <span>
#include <string>

#include <Eigen/Dense>

namespace stochcone {

/// Real symmetric d x d matrix. Inputs are symmetrized as (A + A^T) / 2 on
/// construction and must be finite.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Eigen::MatrixXd& a);

  static SymMatrix identity(std::size_t d);
  static SymMatrix zero(std::size_t d);
  static SymMatrix scalar(std::size_t d, double c);
  static SymMatrix diagonal(std::span<const double> diag);
  static SymMatrix diagonal(std::initializer_list<double> diag);
  /// Builds from d*d row-major entries.
  static SymMatrix from_row_major(std::size_t d, std::span<const double> entries);

  std::size_t dim() const { return static_cast<std::size_t>(a_.rows()); }
  const Eigen::MatrixXd& matrix() const { return a_; }
  double operator()(std::size_t i, std::size_t j) const {
    return a_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  double frobenius_norm() const { return a_.norm(); }
  double trace() const { return a_.trace(); }

  SymMatrix operator+(const SymMatrix& o) const;
  SymMatrix operator-(const SymMatrix& o) const;
  SymMatrix operator*(double c) const;
  friend SymMatrix operator*(double c, const SymMatrix& m) { return m * c; }

  /// Bitwise equality of the entries.
  bool operator==(const SymMatrix& o) const;

 private:
  Eigen::MatrixXd a_;
};

/// Eigenpairs of a symmetric matrix; eigenvalues ascending, eigenvectors as
/// orthonormal columns.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;

  double min_eigenvalue() const { return eigenvalues(0); }
  double max_eigenvalue() const { return eigenvalues(eigenvalues.size() - 1); }
};

/// Cyclic Jacobi eigensolver. Throws ConvergenceError if the off-diagonal
/// mass does not vanish within the sweep cap.
SpectralDecomposition eigh(const SymMatrix& a);

/// Scalar function applied through the spectrum.
struct MatrixFunction {
  enum class Kind { kSqrt, kInvSqrt, kLog, kExp, kInv, kPow };
  Kind kind;
  double exponent = 1.0;  // only read for kPow

  static MatrixFunction sqrt() { return {Kind::kSqrt}; }
  static MatrixFunction inv_sqrt() { return {Kind::kInvSqrt}; }
  static MatrixFunction log() { return {Kind::kLog}; }
  static MatrixFunction exp() { return {Kind::kExp}; }
  static MatrixFunction inv() { return {Kind::kInv}; }
  static MatrixFunction pow(double t) { return {Kind::kPow, t}; }

  bool requires_positive() const { return kind != Kind::kExp; }
  double operator()(double x) const;
  std::string name() const;
};

/// Q f(Lambda) Q^T. Throws DomainError when f needs a positive spectrum and
/// the minimum eigenvalue is <= 0.
SymMatrix matrix_fn(const SymMatrix& a, MatrixFunction f);
SymMatrix matrix_fn(const SpectralDecomposition& spec, MatrixFunction f);

/// b^T a b for symmetric b.
SymMatrix congruence(const SymMatrix& a, const SymMatrix& b);

}  // namespace stochcone
