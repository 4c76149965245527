#include "stochcone/experiments.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "stochcone/error.hpp"
#include "stochcone/means.hpp"
#include "stochcone/order.hpp"
#include "stochcone/transport.hpp"

namespace stochcone {

namespace {

using Rows = std::vector<std::vector<std::string>>;

std::string yes_no(bool b) { return b ? "true" : "false"; }

ExperimentTable agh(const ExperimentOptions& opts) {
  constexpr std::size_t kInstances = 50;
  ExperimentTable t;
  t.columns = {"instance", "n_measures", "dim", "atoms_h", "atoms_g", "atoms_a", "h_le_g", "g_le_a"};
  t.tolerances = {{"dominance", kMeanDominanceTol}, {"karcher_tol", MeanConfig{}.karcher_tol}};
  const Rng root(opts.seed);
  for (auto& block : parallel_rows(kInstances, opts.jobs, [&](std::size_t i) {
         Rng rng = root.split(i);
         const std::size_t n = 2 + rng.index(2);
         const std::size_t d = 2 + rng.index(2);
         std::vector<FinMeasure> mus;
         for (std::size_t k = 0; k < n; ++k) mus.push_back(random_measure(d, 1 + rng.index(3), rng));
         const AghReport r = agh_check(mus);
         return Rows{{std::to_string(i), std::to_string(n), std::to_string(d), std::to_string(r.harmonic.size()),
                      std::to_string(r.geometric.size()), std::to_string(r.arithmetic.size()),
                      yes_no(r.harmonic_le_geometric.holds), yes_no(r.geometric_le_arithmetic.holds)}};
       })) {
    for (auto& row : block) t.rows.push_back(std::move(row));
  }
  return t;
}

ExperimentTable pt_convergence(const ExperimentOptions& opts) {
  constexpr std::size_t kMatrixInstances = 20;
  constexpr std::size_t kMeasureInstances = 5;
  const std::vector<double> ts = {0.5, 0.25, 0.1, 0.05, 0.01, -0.5, -0.25, -0.1, -0.05, -0.01};
  ExperimentTable t;
  t.columns = {"level", "instance", "t", "distance"};
  MeanConfig cfg;
  t.tolerances = {{"karcher_tol", cfg.karcher_tol}, {"max_iter", cfg.max_iter}};
  const Rng root(opts.seed);
  for (auto& block : parallel_rows(kMatrixInstances + kMeasureInstances, opts.jobs, [&](std::size_t i) {
         Rng rng = root.split(i);
         Rows rows;
         if (i < kMatrixInstances) {
           const std::size_t n = 2 + rng.index(2);
           const std::size_t d = 2 + rng.index(2);
           std::vector<PosDefMatrix> as;
           for (std::size_t k = 0; k < n; ++k) as.push_back(random_posdef(d, rng));
           const PosDefMatrix lambda = karcher_mean(as, cfg).mean;
           for (double tt : ts) {
             rows.push_back({"matrix", std::to_string(i), format_double(tt),
                             format_double(thompson_distance(power_mean(as, tt, cfg), lambda))});
           }
         } else {
           const std::size_t d = 2;
           std::vector<FinMeasure> mus;
           for (std::size_t k = 0; k < 2; ++k) mus.push_back(random_measure(d, 2, rng));
           const FinMeasure lambda = measure_mean(MeanKind::geometric(), mus, cfg).measure;
           for (double tt : ts) {
             const FinMeasure pt = measure_mean(MeanKind::power(tt), mus, cfg).measure;
             rows.push_back({"measure", std::to_string(i - kMatrixInstances), format_double(tt),
                             format_double(wasserstein(pt, lambda, 1.0).distance)});
           }
         }
         return rows;
       })) {
    for (auto& row : block) t.rows.push_back(std::move(row));
  }
  return t;
}

ExperimentTable monotone_chain(const ExperimentOptions& opts) {
  constexpr std::size_t kChains = 10;
  constexpr std::size_t kSteps = 20;
  constexpr std::size_t kProbes = 8;
  ExperimentTable t;
  t.columns = {"chain", "step", "w1_to_limit", "le_next", "le_limit", "probes_nondecreasing"};
  t.tolerances = {{"dominance", kMeanDominanceTol}, {"probe_slack", 1e-12}};
  const Rng root(opts.seed);
  const DominanceOptions dom = DominanceOptions::uniform(kMeanDominanceTol);
  for (auto& block : parallel_rows(kChains, opts.jobs, [&](std::size_t c) {
         Rng rng = root.split(c);
         const std::size_t d = 2 + rng.index(2);
         const FinMeasure mu = random_measure(d, 3, rng);
         const SymMatrix a = random_psd(d, rng, 1 + rng.index(d), 0.5);
         const FinMeasure limit = translate(mu, a);
         auto step_measure = [&](std::size_t k) {
           return translate(mu, a * (1.0 - 1.0 / static_cast<double>(k)));
         };
         std::vector<PosDefMatrix> support = mu.points();
         for (const auto& p : limit.points()) support.push_back(p);
         std::vector<MonotoneProbe> probes;
         for (std::size_t p = 0; p < kProbes; ++p) probes.push_back(random_probe(support, rng, p % 2 == 1));

         Rows rows;
         std::vector<double> previous(kProbes, 0.0);
         FinMeasure current = step_measure(1);
         for (std::size_t k = 1; k <= kSteps; ++k) {
           const FinMeasure next = step_measure(k + 1);
           bool nondecreasing = true;
           for (std::size_t p = 0; p < kProbes; ++p) {
             // Antitone probes must be nonincreasing along an increasing chain.
             const double v = integrate(probes[p], current) * (probes[p].antitone ? -1.0 : 1.0);
             if (k > 1 && v < previous[p] - 1e-12) nondecreasing = false;
             previous[p] = v;
           }
           rows.push_back({std::to_string(c), std::to_string(k),
                           format_double(wasserstein(current, limit, 1.0).distance),
                           yes_no(dominates_by_coupling(current, next, dom).holds),
                           yes_no(dominates_by_coupling(current, limit, dom).holds), yes_no(nondecreasing)});
           current = next;
         }
         return rows;
       })) {
    for (auto& row : block) t.rows.push_back(std::move(row));
  }
  return t;
}

ExperimentTable closedness(const ExperimentOptions& opts) {
  constexpr std::size_t kInstances = 10;
  constexpr std::size_t kSteps = 20;
  ExperimentTable t;
  t.columns = {"instance", "step", "w1_mu", "w1_nu", "holds_step", "holds_limit"};
  t.tolerances = {{"step_dominance", 0.0}, {"limit_dominance", kMeanDominanceTol}};
  const Rng root(opts.seed);
  for (auto& block : parallel_rows(kInstances, opts.jobs, [&](std::size_t i) {
         Rng rng = root.split(i);
         const std::size_t d = 2 + rng.index(2);
         const FinMeasure mu = random_measure(d, 1 + rng.index(4), rng);
         // Singular (rank-one) offset, or none: the limit pair sits on the
         // boundary of the order.
         const SymMatrix a = i % 3 == 0 ? SymMatrix::zero(d) : random_psd(d, rng, 1, 0.5);
         const FinMeasure nu = translate(mu, a);
         const bool limit_holds = dominates_by_coupling(mu, nu, DominanceOptions::uniform(kMeanDominanceTol)).holds;
         Rows rows;
         for (std::size_t k = 1; k <= kSteps; ++k) {
           const double h = 1.0 / static_cast<double>(k);
           const FinMeasure mu_k = translate(mu, SymMatrix::identity(d) * (0.5 * h));
           const FinMeasure nu_k = translate(mu, a + SymMatrix::identity(d) * h);
           rows.push_back({std::to_string(i), std::to_string(k), format_double(wasserstein(mu_k, mu, 1.0).distance),
                           format_double(wasserstein(nu_k, nu, 1.0).distance),
                           yes_no(dominates_by_coupling(mu_k, nu_k, DominanceOptions::exact()).holds),
                           yes_no(limit_holds)});
         }
         return rows;
       })) {
    for (auto& row : block) t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"agh", "pt-convergence", "monotone-chain", "closedness"};
  return names;
}

ExperimentTable run_experiment(std::string_view name, const ExperimentOptions& opts) {
  if (name == "agh") return agh(opts);
  if (name == "pt-convergence") return pt_convergence(opts);
  if (name == "monotone-chain") return monotone_chain(opts);
  if (name == "closedness") return closedness(opts);
  throw InputError("unknown experiment \"" + std::string(name) + "\"");
}

std::string to_csv(const ExperimentTable& table, const RunManifest& manifest) {
  std::ostringstream os;
  os << "# manifest: " << manifest.to_json().dump() << "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << table.columns[c];
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
    os << "\n";
  }
  return os.str();
}

std::vector<Rows> parallel_rows(std::size_t count, std::size_t jobs,
                                const std::function<Rows(std::size_t)>& task) {
  std::vector<Rows> out(count);
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = task(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < std::min(jobs, count); ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          out[i] = task(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace stochcone
