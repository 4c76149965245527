#include "stochcone/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "stochcone/error.hpp"

namespace stochcone {

namespace {

double frobenius_distance(const PosDefMatrix& a, const PosDefMatrix& b) {
  return (a.matrix() - b.matrix()).norm();
}

template <typename E>
[[noreturn]] void rethrow_with_index(const E& e, std::size_t i) {
  throw E("atom " + std::to_string(i) + ": " + e.what());
}

}  // namespace

FinMeasure FinMeasure::from_atoms(std::span<const std::pair<PosDefMatrix, double>> pairs) {
  if (pairs.empty()) throw InputError("a measure needs at least one atom");
  FinMeasure mu;
  mu.dim_ = pairs.front().first.dim();
  double total = 0.0;
  for (const auto& [point, weight] : pairs) {
    if (point.dim() != mu.dim_) {
      throw DimensionError("measure atoms have mismatched dimensions (" + std::to_string(mu.dim_) +
                           " vs " + std::to_string(point.dim()) + ")");
    }
    if (!(weight >= 0.0) || !std::isfinite(weight)) {
      throw InputError("atom weights must be finite and nonnegative");
    }
    if (weight == 0.0) continue;
    total += weight;
    const std::size_t k = mu.find(point);
    if (k < mu.atoms_.size()) {
      mu.atoms_[k].weight += weight;
    } else {
      mu.atoms_.push_back({point, weight});
    }
  }
  if (mu.atoms_.empty() || !(total > 0.0)) throw InputError("all atom weights are zero");
  for (auto& a : mu.atoms_) a.weight /= total;
  return mu;
}

FinMeasure FinMeasure::dirac(const PosDefMatrix& x) {
  FinMeasure mu;
  mu.dim_ = x.dim();
  mu.atoms_.push_back({x, 1.0});
  return mu;
}

FinMeasure FinMeasure::uniform(std::span<const PosDefMatrix> points) {
  std::vector<std::pair<PosDefMatrix, double>> pairs;
  pairs.reserve(points.size());
  for (const auto& p : points) pairs.emplace_back(p, 1.0);
  return from_atoms(pairs);
}

std::vector<double> FinMeasure::weights() const {
  std::vector<double> w;
  w.reserve(atoms_.size());
  for (const auto& a : atoms_) w.push_back(a.weight);
  return w;
}

std::vector<PosDefMatrix> FinMeasure::points() const {
  std::vector<PosDefMatrix> p;
  p.reserve(atoms_.size());
  for (const auto& a : atoms_) p.push_back(a.point);
  return p;
}

double FinMeasure::total_mass() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.weight;
  return s;
}

std::size_t FinMeasure::find(const PosDefMatrix& x) const {
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (frobenius_distance(atoms_[i].point, x) <= kAtomMergeTol) return i;
  }
  return atoms_.size();
}

FinMeasure push_forward(const FinMeasure& mu, const PointMap& f) {
  std::vector<std::pair<PosDefMatrix, double>> pairs;
  pairs.reserve(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    try {
      pairs.emplace_back(f(mu[i].point), mu[i].weight);
    } catch (const DomainError& e) {
      rethrow_with_index(e, i);
    } catch (const DimensionError& e) {
      rethrow_with_index(e, i);
    } catch (const InputError& e) {
      rethrow_with_index(e, i);
    }
  }
  return FinMeasure::from_atoms(pairs);
}

FinMeasure invert(const FinMeasure& mu) {
  return push_forward(mu, [](const PosDefMatrix& x) { return x.inverse(); });
}

FinMeasure translate(const FinMeasure& mu, const SymMatrix& a) {
  return push_forward(mu, [&a](const PosDefMatrix& x) { return translate(x, a); });
}

std::size_t ProductMeasure::tuple_count(std::span<const FinMeasure> factors) {
  std::size_t count = 1;
  for (const auto& f : factors) {
    if (f.size() != 0 && count > std::numeric_limits<std::size_t>::max() / f.size()) {
      return std::numeric_limits<std::size_t>::max();
    }
    count *= f.size();
  }
  return count;
}

ProductMeasure::ProductMeasure(std::vector<FinMeasure> factors, std::size_t cap)
    : factors_(std::move(factors)) {
  if (factors_.empty()) throw InputError("product of zero measures");
  for (const auto& f : factors_) {
    if (f.dim() != factors_.front().dim()) throw DimensionError("product: factor dimensions differ");
  }
  const std::size_t count = tuple_count(factors_);
  if (count > cap) {
    throw CapacityError("product measure has " + std::to_string(count) + " tuples, above the cap of " +
                        std::to_string(cap) + "; use sampled evaluation with a sample count");
  }
  tuples_.reserve(count);
  std::vector<std::size_t> idx(factors_.size(), 0);
  for (std::size_t t = 0; t < count; ++t) {
    double w = 1.0;
    for (std::size_t k = 0; k < factors_.size(); ++k) w *= factors_[k][idx[k]].weight;
    tuples_.push_back({idx, w});
    // Odometer, last factor fastest.
    for (std::size_t k = factors_.size(); k-- > 0;) {
      if (++idx[k] < factors_[k].size()) break;
      idx[k] = 0;
    }
  }
}

std::vector<PosDefMatrix> ProductMeasure::points_of(const ProductTuple& t) const {
  std::vector<PosDefMatrix> pts;
  pts.reserve(t.indices.size());
  for (std::size_t k = 0; k < t.indices.size(); ++k) pts.push_back(factors_[k][t.indices[k]].point);
  return pts;
}

std::vector<double> ProductMeasure::marginal(std::size_t k) const {
  std::vector<double> m(factors_.at(k).size(), 0.0);
  for (const auto& t : tuples_) m[t.indices[k]] += t.weight;
  return m;
}

std::vector<std::size_t> sample_indices(const FinMeasure& mu, std::size_t k, Rng& rng) {
  const std::vector<double> w = mu.weights();
  std::vector<double> cdf(w.size());
  std::partial_sum(w.begin(), w.end(), cdf.begin());
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t s = 0; s < k; ++s) {
    const double u = rng.uniform() * cdf.back();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    out.push_back(std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), mu.size() - 1));
  }
  return out;
}

std::vector<PosDefMatrix> sample(const FinMeasure& mu, std::size_t k, Rng& rng) {
  std::vector<PosDefMatrix> out;
  out.reserve(k);
  for (std::size_t i : sample_indices(mu, k, rng)) out.push_back(mu[i].point);
  return out;
}

bool approx_equal(const FinMeasure& a, const FinMeasure& b, double atom_tol, double weight_tol) {
  if (a.size() != b.size() || a.dim() != b.dim()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& atom : a.atoms()) {
    bool matched = false;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      if (frobenius_distance(atom.point, b[j].point) <= atom_tol &&
          std::abs(atom.weight - b[j].weight) <= weight_tol) {
        used[j] = matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

FinMeasure random_measure(std::size_t d, std::size_t atoms, Rng& rng, double spread) {
  std::vector<std::pair<PosDefMatrix, double>> pairs;
  pairs.reserve(atoms);
  for (std::size_t i = 0; i < atoms; ++i) {
    PosDefMatrix p = random_posdef(d, rng, spread);
    pairs.emplace_back(std::move(p), rng.uniform(0.1, 1.0));
  }
  return FinMeasure::from_atoms(pairs);
}

}  // namespace stochcone
