#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "stochcone/io.hpp"

namespace stochcone {

struct ExperimentOptions {
  std::uint64_t seed = 0;
  /// Worker threads; rows are emitted in instance order regardless.
  std::size_t jobs = 1;
};

struct ExperimentTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  json tolerances = json::object();
};

/// Experiments and their CSV columns:
///   agh             instance,n_measures,dim,atoms_h,atoms_g,atoms_a,h_le_g,g_le_a
///   pt-convergence  level,instance,t,distance
///                   (matrix level: d_T(P_t, Lambda); measure level: d_1^W)
///   monotone-chain  chain,step,w1_to_limit,le_next,le_limit,probes_nondecreasing
///   closedness      instance,step,w1_mu,w1_nu,holds_step,holds_limit
const std::vector<std::string>& experiment_names();

/// Throws InputError for an unknown name.
ExperimentTable run_experiment(std::string_view name, const ExperimentOptions& opts);

/// CSV with a leading "# manifest: {...}" comment line; LF line endings.
std::string to_csv(const ExperimentTable& table, const RunManifest& manifest);

/// Runs task(i) for i in [0, count) on `jobs` threads; results keep index order.
std::vector<std::vector<std::vector<std::string>>> parallel_rows(
    std::size_t count, std::size_t jobs,
    const std::function<std::vector<std::vector<std::string>>(std::size_t)>& task);

}  // namespace stochcone
