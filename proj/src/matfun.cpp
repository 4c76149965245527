#include "stochcone/matfun.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "stochcone/error.hpp"

namespace stochcone {

namespace {

constexpr int kMaxJacobiSweeps = 64;

std::string describe(const Eigen::MatrixXd& a) {
  std::ostringstream os;
  os.precision(17);
  os << a.rows() << "x" << a.cols() << " [";
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      os << (i + j > 0 ? " " : "") << a(i, j);
    }
    if (i + 1 < a.rows()) os << ";";
  }
  os << "]";
  return os.str();
}

}  // namespace

SymMatrix::SymMatrix(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw DimensionError("SymMatrix requires a nonempty square matrix, got " +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  if (!a.allFinite()) throw DomainError("SymMatrix entries must be finite");
  a_ = 0.5 * (a + a.transpose());
}

SymMatrix SymMatrix::identity(std::size_t d) {
  return SymMatrix(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d),
                                             static_cast<Eigen::Index>(d)));
}

SymMatrix SymMatrix::zero(std::size_t d) {
  return SymMatrix(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d),
                                         static_cast<Eigen::Index>(d)));
}

SymMatrix SymMatrix::scalar(std::size_t d, double c) { return identity(d) * c; }

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(diag.size()),
                                            static_cast<Eigen::Index>(diag.size()));
  for (std::size_t i = 0; i < diag.size(); ++i) {
    a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = diag[i];
  }
  return SymMatrix(a);
}

SymMatrix SymMatrix::diagonal(std::initializer_list<double> diag) {
  return diagonal(std::span<const double>(diag.begin(), diag.size()));
}

SymMatrix SymMatrix::from_row_major(std::size_t d, std::span<const double> entries) {
  if (entries.size() != d * d) {
    throw DimensionError("expected " + std::to_string(d * d) + " entries for a " +
                         std::to_string(d) + "x" + std::to_string(d) +
                         " matrix, got " + std::to_string(entries.size()));
  }
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = entries[static_cast<std::size_t>(i * n + j)];
  }
  return SymMatrix(a);
}

SymMatrix SymMatrix::operator+(const SymMatrix& o) const {
  if (dim() != o.dim()) throw DimensionError("SymMatrix addition: dimension mismatch");
  return SymMatrix(a_ + o.a_);
}

SymMatrix SymMatrix::operator-(const SymMatrix& o) const {
  if (dim() != o.dim()) throw DimensionError("SymMatrix subtraction: dimension mismatch");
  return SymMatrix(a_ - o.a_);
}

SymMatrix SymMatrix::operator*(double c) const { return SymMatrix(a_ * c); }

bool SymMatrix::operator==(const SymMatrix& o) const {
  return dim() == o.dim() && a_ == o.a_;
}

SpectralDecomposition eigh(const SymMatrix& input) {
  Eigen::MatrixXd a = input.matrix();
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double scale = a.norm();

  bool converged = false;
  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (off == 0.0 || std::sqrt(off) <= 1e-18 * scale) {
      converged = true;
      break;
    }
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation is negligible against both diagonal entries.
        const double g = 100.0 * std::abs(apq);
        if (sweep > 3 && std::abs(a(p, p)) + g == std::abs(a(p, p)) &&
            std::abs(a(q, q)) + g == std::abs(a(q, q))) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged) {
    throw ConvergenceError("eigh: Jacobi sweeps did not converge for matrix " +
                               describe(input.matrix()),
                           0.0);
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });
  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.eigenvalues(k) = a(src, src);
    out.eigenvectors.col(k) = v.col(src);
  }
  return out;
}

double MatrixFunction::operator()(double x) const {
  switch (kind) {
    case Kind::kSqrt: return std::sqrt(x);
    case Kind::kInvSqrt: return 1.0 / std::sqrt(x);
    case Kind::kLog: return std::log(x);
    case Kind::kExp: return std::exp(x);
    case Kind::kInv: return 1.0 / x;
    case Kind::kPow: return std::pow(x, exponent);
  }
  return x;
}

std::string MatrixFunction::name() const {
  switch (kind) {
    case Kind::kSqrt: return "sqrt";
    case Kind::kInvSqrt: return "inv_sqrt";
    case Kind::kLog: return "log";
    case Kind::kExp: return "exp";
    case Kind::kInv: return "inv";
    case Kind::kPow: return "pow(" + std::to_string(exponent) + ")";
  }
  return "?";
}

SymMatrix matrix_fn(const SpectralDecomposition& spec, MatrixFunction f) {
  if (f.requires_positive() && !(spec.min_eigenvalue() > 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "matrix function " << f.name()
       << " requires a positive spectrum; min eigenvalue is " << spec.min_eigenvalue();
    throw DomainError(os.str());
  }
  Eigen::VectorXd fl(spec.eigenvalues.size());
  for (Eigen::Index i = 0; i < fl.size(); ++i) fl(i) = f(spec.eigenvalues(i));
  const Eigen::MatrixXd& q = spec.eigenvectors;
  return SymMatrix(q * fl.asDiagonal() * q.transpose());
}

SymMatrix matrix_fn(const SymMatrix& a, MatrixFunction f) { return matrix_fn(eigh(a), f); }

SymMatrix congruence(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("congruence: dimension mismatch (" + std::to_string(a.dim()) +
                         " vs " + std::to_string(b.dim()) + ")");
  }
  return SymMatrix(b.matrix().transpose() * a.matrix() * b.matrix());
}

}  // namespace stochcone
