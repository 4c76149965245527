#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "stochcone/cone.hpp"
#include "stochcone/coupling.hpp"
#include "stochcone/measure.hpp"

namespace stochcone {

/// Upper-set enumeration refuses merged supports larger than this.
inline constexpr std::size_t kMaxEnumeratedSupport = 20;

/// Masses are compared on a grid of 1 / kMassScale.
inline constexpr std::int64_t kMassScale = 1'000'000'000;

struct DominanceOptions {
  /// Allowed excess mu(U) - nu(U) on any upper set U.
  double mass_tol = 1e-9;
  /// Slack of the underlying Loewner order.
  OrderTolerance order{};
  /// Decide under the reversed order (x <= y read as y <= x).
  bool reversed = false;

  /// Mass and order slack both set to tol.
  static DominanceOptions uniform(double tol) {
    DominanceOptions o;
    o.mass_tol = tol;
    o.order = OrderTolerance(tol);
    return o;
  }
  static DominanceOptions exact() { return uniform(0.0); }
};

/// Order relation on a finite point list: leq[i][j] iff point_i <= point_j.
class PointRelation {
 public:
  PointRelation(std::span<const PosDefMatrix> points, OrderTolerance tol, bool reversed = false);
  /// Builds directly from a boolean matrix; the diagonal is forced true.
  explicit PointRelation(std::vector<std::vector<bool>> leq);

  std::size_t size() const { return leq_.size(); }
  bool leq(std::size_t i, std::size_t j) const { return leq_[i][j]; }
  /// Reflexive-transitive closure.
  PointRelation closure() const;
  bool is_transitive() const;

 private:
  std::vector<std::vector<bool>> leq_;
};

/// Subset of a point list that is closed upward under a relation.
struct UpperSet {
  std::vector<std::size_t> members;  // ascending

  bool contains(std::size_t i) const;
  bool operator==(const UpperSet&) const = default;
};

/// All upward-closed subsets of the preorder generated by `relation`,
/// including the empty and the full set. Enumerated by depth-first search
/// over antichains. Throws CapacityError above kMaxEnumeratedSupport points.
std::vector<UpperSet> enumerate_upper_sets(const PointRelation& relation);
std::vector<UpperSet> enumerate_upper_sets(std::span<const PosDefMatrix> points, OrderTolerance tol = {});

/// Merged support of two measures with per-point masses and the order
/// relation. Each merged point carries at most one atom of each measure.
class OrderedSupport {
 public:
  OrderedSupport(const FinMeasure& mu, const FinMeasure& nu, const DominanceOptions& opts);

  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  std::size_t size() const { return points_.size(); }
  const std::vector<PosDefMatrix>& points() const { return points_; }
  const PointRelation& relation() const { return relation_; }
  /// Atom index in mu / nu for merged point i, or kNone.
  std::size_t mu_atom(std::size_t i) const { return mu_atom_[i]; }
  std::size_t nu_atom(std::size_t i) const { return nu_atom_[i]; }
  /// Point index of mu atom a / nu atom b.
  std::size_t point_of_mu(std::size_t a) const { return mu_point_[a]; }
  std::size_t point_of_nu(std::size_t b) const { return nu_point_[b]; }
  double mu_mass(std::size_t i) const { return mu_mass_[i]; }
  double nu_mass(std::size_t i) const { return nu_mass_[i]; }
  std::int64_t mu_quanta(std::size_t i) const { return mu_q_[i]; }
  std::int64_t nu_quanta(std::size_t i) const { return nu_q_[i]; }
  /// Quantized weight of mu atom a / nu atom b.
  std::int64_t mu_atom_quanta(std::size_t a) const { return mu_atom_q_[a]; }
  std::int64_t nu_atom_quanta(std::size_t b) const { return nu_atom_q_[b]; }

  /// Upward closure of a set of point indices.
  UpperSet up_closure(std::span<const std::size_t> seeds) const;

 private:
  std::vector<PosDefMatrix> points_;
  std::vector<std::size_t> mu_atom_, nu_atom_, mu_point_, nu_point_;
  std::vector<double> mu_mass_, nu_mass_;
  std::vector<std::int64_t> mu_q_, nu_q_, mu_atom_q_, nu_atom_q_;
  PointRelation relation_;
};

/// Upper set on which mu puts more mass than nu.
struct UpperSetViolation {
  std::vector<PosDefMatrix> support;  // merged support the indices refer to
  UpperSet set;
  double mu_mass;
  double nu_mass;
};

/// Certificate of the enumerative decider when dominance holds: every upper
/// set was checked.
struct UpperSetAudit {
  std::size_t sets_checked;
};

struct DominanceVerdict {
  bool holds;
  std::variant<Coupling, UpperSetViolation, UpperSetAudit> certificate;

  const Coupling* coupling() const { return std::get_if<Coupling>(&certificate); }
  const UpperSetViolation* violation() const { return std::get_if<UpperSetViolation>(&certificate); }
};

/// mu <= nu iff a coupling supported on {(x, y) : x <= y} exists. Decided by
/// max-flow on the bipartite graph mu-atoms -> nu-atoms with weights on the
/// 1e-9 grid; a shortfall yields the min-cut upper set.
DominanceVerdict dominates_by_coupling(const FinMeasure& mu, const FinMeasure& nu,
                                       const DominanceOptions& opts = {});

/// mu <= nu iff mu(U) <= nu(U) + tol for every upper set U of the merged
/// support. Throws CapacityError above kMaxEnumeratedSupport merged points.
DominanceVerdict dominates_by_upper_sets(const FinMeasure& mu, const FinMeasure& nu,
                                         const DominanceOptions& opts = {});

/// Bounded increasing test function phi(tr(B x)), or bounded decreasing
/// phi(tr(B x^{-1})) when antitone. phi is piecewise linear and
/// nondecreasing, constant outside its knots, with phi >= 0.
struct MonotoneProbe {
  SymMatrix b;
  std::vector<double> knots;
  std::vector<double> values;
  bool antitone = false;

  double phi(double s) const;
  double operator()(const PosDefMatrix& x) const;
};

/// Random probe whose knots span the traces attained on `points`.
MonotoneProbe random_probe(std::span<const PosDefMatrix> points, Rng& rng, bool antitone = false);
double integrate(const MonotoneProbe& f, const FinMeasure& mu);

struct ProbeReport {
  bool consistent;
  std::size_t trials_run;
  std::optional<MonotoneProbe> violating_probe;
  double mu_integral = 0.0;
  double nu_integral = 0.0;
};

/// Necessary-condition falsifier: for `trials` random monotone probes checks
/// the integral of f against mu is at most that against nu (and the reverse
/// for antitone probes, which alternate with monotone ones). A consistent
/// report does not prove mu <= nu.
ProbeReport probe_monotone_functionals(const FinMeasure& mu, const FinMeasure& nu, std::size_t trials,
                                       std::uint64_t seed, double tol = 1e-9);

}  // namespace stochcone
