#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "stochcone/cone.hpp"
#include "stochcone/random.hpp"

namespace stochcone {

/// Atoms closer than this in Frobenius norm are merged.
inline constexpr double kAtomMergeTol = 1e-10;
inline constexpr std::size_t kDefaultProductCap = 4096;

struct Atom {
  PosDefMatrix point;
  double weight;
};

/// Finitely supported probability measure on the cone. Weights are strictly
/// positive and sum to one; no two atoms lie within kAtomMergeTol.
class FinMeasure {
 public:
  /// Normalizes weights and merges near-duplicate atoms, keeping the first
  /// occurrence's point. Zero-weight entries are dropped.
  static FinMeasure from_atoms(std::span<const std::pair<PosDefMatrix, double>> pairs);
  static FinMeasure from_atoms(const std::vector<std::pair<PosDefMatrix, double>>& pairs) {
    return from_atoms(std::span<const std::pair<PosDefMatrix, double>>(pairs));
  }
  static FinMeasure dirac(const PosDefMatrix& x);
  /// Uniform measure (1/n) sum delta_{A_j}.
  static FinMeasure uniform(std::span<const PosDefMatrix> points);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return atoms_.size(); }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const Atom& operator[](std::size_t i) const { return atoms_[i]; }
  std::vector<double> weights() const;
  std::vector<PosDefMatrix> points() const;
  double total_mass() const;

  /// Index of the atom within kAtomMergeTol of x, or size() if none.
  std::size_t find(const PosDefMatrix& x) const;

 private:
  FinMeasure() = default;
  std::size_t dim_ = 0;
  std::vector<Atom> atoms_;
};

inline FinMeasure dirac(const PosDefMatrix& x) { return FinMeasure::dirac(x); }

using PointMap = std::function<PosDefMatrix(const PosDefMatrix&)>;

/// f_* mu. Errors thrown by f are rethrown as the same category with the atom
/// index prepended.
FinMeasure push_forward(const FinMeasure& mu, const PointMap& f);

/// Push-forward by matrix inversion.
FinMeasure invert(const FinMeasure& mu);

/// Push-forward by the translation x -> x + a (a positive semidefinite).
FinMeasure translate(const FinMeasure& mu, const SymMatrix& a);

struct ProductTuple {
  std::vector<std::size_t> indices;  // one atom index per factor
  double weight;
};

/// Product of finitely many measures, materialized when small enough.
class ProductMeasure {
 public:
  /// Throws CapacityError when the tuple count exceeds cap.
  ProductMeasure(std::vector<FinMeasure> factors, std::size_t cap = kDefaultProductCap);

  /// Number of tuples, saturating at SIZE_MAX.
  static std::size_t tuple_count(std::span<const FinMeasure> factors);

  const std::vector<FinMeasure>& factors() const { return factors_; }
  const std::vector<ProductTuple>& tuples() const { return tuples_; }
  std::vector<PosDefMatrix> points_of(const ProductTuple& t) const;
  /// Marginal weights of factor k, accumulated from the tuples.
  std::vector<double> marginal(std::size_t k) const;

 private:
  std::vector<FinMeasure> factors_;
  std::vector<ProductTuple> tuples_;
};

inline ProductMeasure product(std::vector<FinMeasure> mus, std::size_t cap = kDefaultProductCap) {
  return ProductMeasure(std::move(mus), cap);
}

/// i.i.d. draws by inverse CDF over atom weights.
std::vector<PosDefMatrix> sample(const FinMeasure& mu, std::size_t k, Rng& rng);
std::vector<std::size_t> sample_indices(const FinMeasure& mu, std::size_t k, Rng& rng);

/// Atom-wise comparison: a bijection between supports with Frobenius
/// distance <= atom_tol and weight difference <= weight_tol.
bool approx_equal(const FinMeasure& a, const FinMeasure& b, double atom_tol, double weight_tol);

/// Random measure with `atoms` atoms drawn by random_posdef and weights
/// uniform on (0.1, 1) before normalization.
FinMeasure random_measure(std::size_t d, std::size_t atoms, Rng& rng, double spread = 0.5);

}  // namespace stochcone
