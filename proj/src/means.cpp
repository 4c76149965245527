#include "stochcone/means.hpp"

#include <cmath>
#include <sstream>

#include "stochcone/error.hpp"

namespace stochcone {

namespace {

void require_nonempty_same_dim(std::span<const PosDefMatrix> as, const char* op) {
  if (as.empty()) throw InputError(std::string(op) + ": empty input list");
  for (const auto& a : as) {
    if (a.dim() != as.front().dim()) throw DimensionError(std::string(op) + ": matrices differ in dimension");
  }
}

struct KarcherState {
  SymMatrix sqrt_x;
  SymMatrix inv_sqrt_x;
  SymMatrix gradient;  // sum_j w_j log(X^{-1/2} A_j X^{-1/2})
  double residual;
};

KarcherState karcher_state(const PosDefMatrix& x, std::span<const PosDefMatrix> as,
                           std::span<const double> weights) {
  const SpectralDecomposition spec = eigh(x.sym());
  KarcherState st{matrix_fn(spec, MatrixFunction::sqrt()), matrix_fn(spec, MatrixFunction::inv_sqrt()),
                  SymMatrix::zero(x.dim()), 0.0};
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(x.matrix().rows(), x.matrix().cols());
  for (std::size_t j = 0; j < as.size(); ++j) {
    const double w = weights.empty() ? 1.0 : weights[j];
    g += w * matrix_fn(congruence(as[j].sym(), st.inv_sqrt_x), MatrixFunction::log()).matrix();
  }
  st.gradient = SymMatrix(g);
  st.residual = st.gradient.frobenius_norm();
  return st;
}

KarcherResult karcher_impl(std::span<const PosDefMatrix> as, std::span<const double> weights,
                           double threshold, const MeanConfig& cfg) {
  cfg.validate();
  double weight_total = 0.0;
  Eigen::MatrixXd start = Eigen::MatrixXd::Zero(as.front().matrix().rows(), as.front().matrix().cols());
  for (std::size_t j = 0; j < as.size(); ++j) {
    const double w = weights.empty() ? 1.0 : weights[j];
    weight_total += w;
    start += w * as[j].matrix();
  }
  PosDefMatrix x(SymMatrix(start / weight_total), 0.0);
  KarcherState st = karcher_state(x, as, weights);
  double step = 1.0;
  std::size_t iter = 0;
  while (st.residual > threshold) {
    if (iter >= cfg.max_iter) {
      std::ostringstream os;
      os.precision(17);
      os << "karcher_mean did not reach residual " << threshold << " within " << cfg.max_iter
         << " iterations; last residual " << st.residual;
      throw ConvergenceError(os.str(), st.residual);
    }
    ++iter;
    const SymMatrix update =
        matrix_fn(st.gradient * (step / weight_total), MatrixFunction::exp());
    PosDefMatrix candidate(congruence(update, st.sqrt_x), 0.0);
    KarcherState next = karcher_state(candidate, as, weights);
    if (next.residual < st.residual) {
      x = std::move(candidate);
      st = std::move(next);
    } else {
      step *= cfg.step_shrink;
    }
  }
  return {std::move(x), st.residual, iter};
}

PosDefMatrix inverse_of(const PosDefMatrix& a) { return a.inverse(); }

std::vector<PosDefMatrix> inverses(std::span<const PosDefMatrix> as) {
  std::vector<PosDefMatrix> out;
  out.reserve(as.size());
  for (const auto& a : as) out.push_back(inverse_of(a));
  return out;
}

}  // namespace

void MeanConfig::validate() const {
  if (!(karcher_tol > 0.0)) throw InputError("karcher_tol must be positive");
  if (max_iter < 1) throw InputError("max_iter must be at least 1");
  if (!(step_shrink > 0.0 && step_shrink < 1.0)) throw InputError("step_shrink must lie in (0, 1)");
  if (!(std::abs(power_t) <= 1.0)) throw InputError("power_t must lie in [-1, 1]");
}

PosDefMatrix arith_mean(std::span<const PosDefMatrix> as) {
  require_nonempty_same_dim(as, "arith_mean");
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(as.front().matrix().rows(), as.front().matrix().cols());
  for (const auto& a : as) s += a.matrix();
  return PosDefMatrix(SymMatrix(s / static_cast<double>(as.size())), 0.0);
}

PosDefMatrix harm_mean(std::span<const PosDefMatrix> as) {
  require_nonempty_same_dim(as, "harm_mean");
  return arith_mean(inverses(as)).inverse();
}

PosDefMatrix geo_t(const PosDefMatrix& a, const PosDefMatrix& b, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("geo_t: t must lie in [0, 1]");
  if (a.dim() != b.dim()) throw DimensionError("geo_t: dimension mismatch");
  if (t == 0.0) return a;
  if (t == 1.0) return b;
  const SpectralDecomposition spec = eigh(a.sym());
  const SymMatrix sa = matrix_fn(spec, MatrixFunction::sqrt());
  const SymMatrix isa = matrix_fn(spec, MatrixFunction::inv_sqrt());
  const SymMatrix inner = matrix_fn(congruence(b.sym(), isa), MatrixFunction::pow(t));
  return PosDefMatrix(congruence(inner, sa), 0.0);
}

KarcherResult karcher_mean(std::span<const PosDefMatrix> as, const MeanConfig& cfg) {
  require_nonempty_same_dim(as, "karcher_mean");
  return karcher_impl(as, {}, cfg.karcher_tol * static_cast<double>(as.size()), cfg);
}

KarcherResult karcher_barycenter(const FinMeasure& mu, const MeanConfig& cfg) {
  const std::vector<PosDefMatrix> pts = mu.points();
  const std::vector<double> w = mu.weights();
  return karcher_impl(pts, w, cfg.karcher_tol, cfg);
}

double karcher_residual(const PosDefMatrix& x, std::span<const PosDefMatrix> as,
                        std::span<const double> weights) {
  if (!weights.empty() && weights.size() != as.size()) {
    throw DimensionError("karcher_residual: weights and matrices differ in length");
  }
  const SymMatrix isx = matrix_fn(x.sym(), MatrixFunction::inv_sqrt());
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(x.matrix().rows(), x.matrix().cols());
  for (std::size_t j = 0; j < as.size(); ++j) {
    const double w = weights.empty() ? 1.0 : weights[j];
    g += w * matrix_fn(congruence(as[j].sym(), isx), MatrixFunction::log()).matrix();
  }
  return SymMatrix(g).frobenius_norm();
}

PosDefMatrix power_mean(std::span<const PosDefMatrix> as, double t, const MeanConfig& cfg) {
  require_nonempty_same_dim(as, "power_mean");
  cfg.validate();
  if (t == 0.0) throw DomainError("power_mean: t = 0 is the Karcher mean; call karcher_mean");
  if (!(std::abs(t) <= 1.0)) throw DomainError("power_mean: t must lie in [-1, 1]");
  if (t == 1.0) return arith_mean(as);
  if (t == -1.0) return harm_mean(as);
  if (t < 0.0) return power_mean(inverses(as), -t, cfg).inverse();

  const std::size_t cap = cfg.max_iter * static_cast<std::size_t>(std::ceil(1.0 / t));
  const double n = static_cast<double>(as.size());
  PosDefMatrix x = arith_mean(as);
  double last = 0.0;
  for (std::size_t iter = 0; iter < cap; ++iter) {
    const SpectralDecomposition spec = eigh(x.sym());
    const SymMatrix sx = matrix_fn(spec, MatrixFunction::sqrt());
    const SymMatrix isx = matrix_fn(spec, MatrixFunction::inv_sqrt());
    Eigen::MatrixXd inner = Eigen::MatrixXd::Zero(x.matrix().rows(), x.matrix().cols());
    for (const auto& a : as) {
      inner += matrix_fn(congruence(a.sym(), isx), MatrixFunction::pow(t)).matrix();
    }
    PosDefMatrix next(congruence(SymMatrix(inner / n), sx), 0.0);
    last = thompson_distance(next, x);
    x = std::move(next);
    if (last <= cfg.karcher_tol) return x;
  }
  std::ostringstream os;
  os.precision(17);
  os << "power_mean(t=" << t << ") did not converge within " << cap << " iterations; last step " << last;
  throw ConvergenceError(os.str(), last);
}

std::string MeanKind::name() const {
  switch (kind) {
    case Kind::kGeometric: return "karcher";
    case Kind::kArithmetic: return "arith";
    case Kind::kHarmonic: return "harm";
    case Kind::kPower: {
      std::ostringstream os;
      os.precision(17);
      os << "power:" << t;
      return os.str();
    }
  }
  return "?";
}

PosDefMatrix tuple_mean(MeanKind kind, std::span<const PosDefMatrix> as, const MeanConfig& cfg) {
  switch (kind.kind) {
    case MeanKind::Kind::kGeometric: return karcher_mean(as, cfg).mean;
    case MeanKind::Kind::kArithmetic: return arith_mean(as);
    case MeanKind::Kind::kHarmonic: return harm_mean(as);
    case MeanKind::Kind::kPower: return power_mean(as, kind.t, cfg);
  }
  throw InputError("unknown mean kind");
}

LiftedMean measure_mean(MeanKind kind, std::span<const FinMeasure> mus, const MeanConfig& cfg) {
  cfg.validate();
  if (mus.empty()) throw InputError("measure_mean: empty measure list");
  for (const auto& mu : mus) {
    if (mu.dim() != mus.front().dim()) throw DimensionError("measure_mean: measures differ in dimension");
  }
  std::vector<std::pair<PosDefMatrix, double>> atoms;
  if (ProductMeasure::tuple_count(mus) <= cfg.product_cap) {
    const ProductMeasure prod(std::vector<FinMeasure>(mus.begin(), mus.end()), cfg.product_cap);
    atoms.reserve(prod.tuples().size());
    for (const auto& tuple : prod.tuples()) {
      const auto pts = prod.points_of(tuple);
      atoms.emplace_back(tuple_mean(kind, pts, cfg), tuple.weight);
    }
    return {FinMeasure::from_atoms(atoms), 0};
  }
  if (cfg.mc_samples == 0) {
    throw CapacityError("measure_mean: product has more than " + std::to_string(cfg.product_cap) +
                        " tuples and mc_samples is 0");
  }
  Rng rng(cfg.seed);
  std::vector<std::vector<std::size_t>> draws;
  draws.reserve(mus.size());
  for (std::size_t k = 0; k < mus.size(); ++k) {
    Rng stream = rng.split(k);
    draws.push_back(sample_indices(mus[k], cfg.mc_samples, stream));
  }
  atoms.reserve(cfg.mc_samples);
  std::vector<PosDefMatrix> pts;
  for (std::size_t s = 0; s < cfg.mc_samples; ++s) {
    pts.clear();
    for (std::size_t k = 0; k < mus.size(); ++k) pts.push_back(mus[k][draws[k][s]].point);
    atoms.emplace_back(tuple_mean(kind, pts, cfg), 1.0);
  }
  return {FinMeasure::from_atoms(atoms), cfg.mc_samples};
}

AghReport agh_check(std::span<const FinMeasure> mus, const MeanConfig& cfg, double tol) {
  MeanConfig exact = cfg;
  exact.mc_samples = 0;
  FinMeasure h = measure_mean(MeanKind::harmonic(), mus, exact).measure;
  FinMeasure g = measure_mean(MeanKind::geometric(), mus, exact).measure;
  FinMeasure a = measure_mean(MeanKind::arithmetic(), mus, exact).measure;
  const DominanceOptions opts = DominanceOptions::uniform(tol);
  DominanceVerdict hg = dominates_by_coupling(h, g, opts);
  DominanceVerdict ga = dominates_by_coupling(g, a, opts);
  return {std::move(h), std::move(g), std::move(a), std::move(hg), std::move(ga)};
}

}  // namespace stochcone
