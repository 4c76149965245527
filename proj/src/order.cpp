#include "stochcone/order.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "stochcone/error.hpp"
#include "stochcone/flow.hpp"

namespace stochcone {

namespace {

using Mask = std::uint32_t;

std::int64_t quantized_tolerance(double mass_tol) {
  if (!(mass_tol >= 0.0)) throw InputError("mass tolerance must be nonnegative");
  return static_cast<std::int64_t>(std::floor(mass_tol * static_cast<double>(kMassScale) + 0.5));
}

void require_same_dim(const FinMeasure& mu, const FinMeasure& nu) {
  if (mu.dim() != nu.dim()) {
    throw DimensionError("dominance: measures have dimensions " + std::to_string(mu.dim()) + " and " +
                         std::to_string(nu.dim()));
  }
}

UpperSetViolation make_violation(const OrderedSupport& sup, UpperSet set) {
  UpperSetViolation v{sup.points(), std::move(set), 0.0, 0.0};
  for (std::size_t i : v.set.members) {
    v.mu_mass += sup.mu_mass(i);
    v.nu_mass += sup.nu_mass(i);
  }
  return v;
}

double trace_product(const SymMatrix& b, const Eigen::MatrixXd& x) {
  return (b.matrix().array() * x.array()).sum();
}

}  // namespace

PointRelation::PointRelation(std::span<const PosDefMatrix> points, OrderTolerance tol, bool reversed)
    : leq_(points.size(), std::vector<bool>(points.size(), false)) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < points.size(); ++j) {
      leq_[i][j] = i == j || (reversed ? loewner_leq(points[j], points[i], tol)
                                       : loewner_leq(points[i], points[j], tol));
    }
  }
}

PointRelation::PointRelation(std::vector<std::vector<bool>> leq) : leq_(std::move(leq)) {
  for (std::size_t i = 0; i < leq_.size(); ++i) {
    if (leq_[i].size() != leq_.size()) throw DimensionError("relation matrix must be square");
    leq_[i][i] = true;
  }
}

PointRelation PointRelation::closure() const {
  auto t = leq_;
  const std::size_t n = t.size();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!t[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (t[k][j]) t[i][j] = true;
      }
    }
  }
  return PointRelation(std::move(t));
}

bool PointRelation::is_transitive() const {
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (!leq_[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (leq_[k][j] && !leq_[i][j]) return false;
      }
    }
  }
  return true;
}

bool UpperSet::contains(std::size_t i) const {
  return std::binary_search(members.begin(), members.end(), i);
}

std::vector<UpperSet> enumerate_upper_sets(const PointRelation& relation) {
  const std::size_t n = relation.size();
  if (n > kMaxEnumeratedSupport) {
    throw CapacityError("upper-set enumeration limited to " + std::to_string(kMaxEnumeratedSupport) +
                        " points, got " + std::to_string(n) + "; use the coupling decider");
  }
  const PointRelation t = relation.closure();
  std::vector<Mask> up(n, 0);
  std::vector<bool> canonical(n, true);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (t.leq(i, j)) up[i] |= Mask{1} << j;
      if (j < i && t.leq(i, j) && t.leq(j, i)) canonical[i] = false;
    }
  }

  std::vector<UpperSet> out;
  auto emit = [&](Mask upset) {
    UpperSet s;
    for (std::size_t i = 0; i < n; ++i) {
      if (upset >> i & 1U) s.members.push_back(i);
    }
    out.push_back(std::move(s));
  };
  // Each antichain of canonical representatives generates one upper set.
  auto dfs = [&](auto&& self, std::size_t start, Mask antichain, Mask upset) -> void {
    emit(upset);
    for (std::size_t j = start; j < n; ++j) {
      if (!canonical[j] || (upset >> j & 1U) || (up[j] & antichain)) continue;
      self(self, j + 1, antichain | (Mask{1} << j), upset | up[j]);
    }
  };
  dfs(dfs, 0, 0, 0);
  return out;
}

std::vector<UpperSet> enumerate_upper_sets(std::span<const PosDefMatrix> points, OrderTolerance tol) {
  if (points.size() > kMaxEnumeratedSupport) {
    throw CapacityError("upper-set enumeration limited to " + std::to_string(kMaxEnumeratedSupport) +
                        " points, got " + std::to_string(points.size()));
  }
  return enumerate_upper_sets(PointRelation(points, tol));
}

OrderedSupport::OrderedSupport(const FinMeasure& mu, const FinMeasure& nu, const DominanceOptions& opts)
    : relation_(std::vector<std::vector<bool>>{}) {
  require_same_dim(mu, nu);
  for (std::size_t a = 0; a < mu.size(); ++a) {
    points_.push_back(mu[a].point);
    mu_atom_.push_back(a);
    nu_atom_.push_back(kNone);
    mu_point_.push_back(a);
  }
  for (std::size_t b = 0; b < nu.size(); ++b) {
    std::size_t hit = kNone;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      if ((points_[i].matrix() - nu[b].point.matrix()).norm() <= kAtomMergeTol) {
        hit = i;
        break;
      }
    }
    if (hit == kNone) {
      hit = points_.size();
      points_.push_back(nu[b].point);
      mu_atom_.push_back(kNone);
      nu_atom_.push_back(b);
    } else {
      nu_atom_[hit] = b;
    }
    nu_point_.push_back(hit);
  }
  const std::size_t n = points_.size();
  mu_mass_.assign(n, 0.0);
  nu_mass_.assign(n, 0.0);
  mu_q_.assign(n, 0);
  nu_q_.assign(n, 0);
  const auto mw = mu.weights();
  const auto nw = nu.weights();
  const auto mq = quantize_weights(mw, kMassScale);
  const auto nq = quantize_weights(nw, kMassScale);
  for (std::size_t a = 0; a < mu.size(); ++a) {
    mu_mass_[mu_point_[a]] += mw[a];
    mu_q_[mu_point_[a]] += mq[a];
  }
  for (std::size_t b = 0; b < nu.size(); ++b) {
    nu_mass_[nu_point_[b]] += nw[b];
    nu_q_[nu_point_[b]] += nq[b];
  }
  mu_atom_q_ = mq;
  nu_atom_q_ = nq;
  relation_ = PointRelation(points_, opts.order, opts.reversed);
}

UpperSet OrderedSupport::up_closure(std::span<const std::size_t> seeds) const {
  std::vector<bool> in(size(), false);
  std::deque<std::size_t> queue;
  for (std::size_t s : seeds) {
    if (!in[s]) {
      in[s] = true;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    for (std::size_t j = 0; j < size(); ++j) {
      if (!in[j] && relation_.leq(i, j)) {
        in[j] = true;
        queue.push_back(j);
      }
    }
  }
  UpperSet u;
  for (std::size_t i = 0; i < size(); ++i) {
    if (in[i]) u.members.push_back(i);
  }
  return u;
}

DominanceVerdict dominates_by_coupling(const FinMeasure& mu, const FinMeasure& nu,
                                       const DominanceOptions& opts) {
  const std::int64_t tol_q = quantized_tolerance(opts.mass_tol);
  const OrderedSupport sup(mu, nu, opts);
  const std::size_t m = mu.size();
  const std::size_t n = nu.size();
  const std::size_t source = 0;
  const std::size_t sink = m + n + 1;
  MaxFlow net(m + n + 2);
  for (std::size_t a = 0; a < m; ++a) net.add_edge(source, 1 + a, sup.mu_atom_quanta(a));
  std::vector<std::vector<std::size_t>> middle(m, std::vector<std::size_t>(n, OrderedSupport::kNone));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (sup.relation().leq(sup.point_of_mu(a), sup.point_of_nu(b))) {
        middle[a][b] = net.add_edge(1 + a, 1 + m + b, kMassScale);
      }
    }
  }
  for (std::size_t b = 0; b < n; ++b) net.add_edge(1 + m + b, sink, sup.nu_atom_quanta(b));

  const std::int64_t flow = net.run(source, sink);
  if (kMassScale - flow <= tol_q) {
    Coupling c{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n))};
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (middle[a][b] != OrderedSupport::kNone) {
          c.weights(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
              static_cast<double>(net.flow(middle[a][b])) / static_cast<double>(kMassScale);
        }
      }
    }
    return {true, std::move(c)};
  }
  const std::vector<bool> side = net.source_side();
  std::vector<std::size_t> seeds;
  for (std::size_t a = 0; a < m; ++a) {
    if (side[1 + a]) seeds.push_back(sup.point_of_mu(a));
  }
  return {false, make_violation(sup, sup.up_closure(seeds))};
}

DominanceVerdict dominates_by_upper_sets(const FinMeasure& mu, const FinMeasure& nu,
                                         const DominanceOptions& opts) {
  const std::int64_t tol_q = quantized_tolerance(opts.mass_tol);
  const OrderedSupport sup(mu, nu, opts);
  if (sup.size() > kMaxEnumeratedSupport) {
    throw CapacityError("merged support has " + std::to_string(sup.size()) +
                        " points, above the enumeration limit of " +
                        std::to_string(kMaxEnumeratedSupport) + "; use dominates_by_coupling");
  }
  std::vector<UpperSet> sets = enumerate_upper_sets(sup.relation());
  for (auto& u : sets) {
    std::int64_t excess = 0;
    for (std::size_t i : u.members) excess += sup.mu_quanta(i) - sup.nu_quanta(i);
    if (excess > tol_q) return {false, make_violation(sup, std::move(u))};
  }
  return {true, UpperSetAudit{sets.size()}};
}

double MonotoneProbe::phi(double s) const {
  if (s <= knots.front()) return values.front();
  if (s >= knots.back()) return values.back();
  const auto it = std::upper_bound(knots.begin(), knots.end(), s);
  const std::size_t k = static_cast<std::size_t>(it - knots.begin());
  const double lo = knots[k - 1];
  const double hi = knots[k];
  const double frac = hi > lo ? (s - lo) / (hi - lo) : 1.0;
  return values[k - 1] + frac * (values[k] - values[k - 1]);
}

double MonotoneProbe::operator()(const PosDefMatrix& x) const {
  if (antitone) return phi(trace_product(b, matrix_fn(x.sym(), MatrixFunction::inv()).matrix()));
  return phi(trace_product(b, x.matrix()));
}

MonotoneProbe random_probe(std::span<const PosDefMatrix> points, Rng& rng, bool antitone) {
  if (points.empty()) throw InputError("random_probe needs at least one point");
  const std::size_t d = points.front().dim();
  MonotoneProbe f{random_psd(d, rng, 1 + rng.index(d), 1.0 / static_cast<double>(d)), {}, {}, antitone};
  double lo = 0.0;
  double hi = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Eigen::MatrixXd x =
        antitone ? matrix_fn(points[i].sym(), MatrixFunction::inv()).matrix() : points[i].matrix();
    const double s = trace_product(f.b, x);
    lo = i == 0 ? s : std::min(lo, s);
    hi = i == 0 ? s : std::max(hi, s);
  }
  if (hi - lo < 1e-12) {
    lo -= 1.0;
    hi += 1.0;
  }
  const std::size_t interior = rng.index(3);
  f.knots.push_back(lo);
  for (std::size_t k = 0; k < interior; ++k) f.knots.push_back(rng.uniform(lo, hi));
  f.knots.push_back(hi);
  std::sort(f.knots.begin(), f.knots.end());
  f.values.push_back(rng.uniform());
  for (std::size_t k = 1; k < f.knots.size(); ++k) f.values.push_back(f.values.back() + rng.uniform(0.05, 1.0));
  return f;
}

double integrate(const MonotoneProbe& f, const FinMeasure& mu) {
  double s = 0.0;
  for (const auto& a : mu.atoms()) s += a.weight * f(a.point);
  return s;
}

ProbeReport probe_monotone_functionals(const FinMeasure& mu, const FinMeasure& nu, std::size_t trials,
                                       std::uint64_t seed, double tol) {
  require_same_dim(mu, nu);
  if (trials == 0) throw InputError("probe_monotone_functionals needs at least one trial");
  std::vector<PosDefMatrix> support = mu.points();
  for (const auto& p : nu.points()) support.push_back(p);
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const bool antitone = t % 2 == 1;
    MonotoneProbe f = random_probe(support, rng, antitone);
    const double im = integrate(f, mu);
    const double in = integrate(f, nu);
    const double slack = tol * (1.0 + std::max(std::abs(im), std::abs(in)));
    const bool bad = antitone ? im < in - slack : im > in + slack;
    if (bad) return {false, t + 1, std::move(f), im, in};
  }
  return {true, trials, std::nullopt, 0.0, 0.0};
}

}  // namespace stochcone
