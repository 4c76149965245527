#include "stochcone/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>

#include <CLI11.hpp>

#include "stochcone/error.hpp"
#include "stochcone/experiments.hpp"
#include "stochcone/io.hpp"
#include "stochcone/means.hpp"
#include "stochcone/order.hpp"
#include "stochcone/transport.hpp"

namespace stochcone {

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("STOCHCONE_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw InputError(std::string("STOCHCONE_SEED is not an unsigned integer: ") + env);
    }
  }
  return 0;
}

std::string joined(const std::vector<std::string>& args) {
  std::string s;
  for (std::size_t i = 1; i < args.size(); ++i) s += (i > 1 ? " " : "") + args[i];
  return s;
}

struct Loaded {
  Dataset data;
  std::string hash;
};

Loaded load(const std::string& path) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("malformed JSON in " + path + ": " + e.what());
  }
  return {dataset_from_json(j), fnv1a_hex(text)};
}

MeanKind parse_kind(const std::string& s) {
  if (s == "karcher") return MeanKind::geometric();
  if (s == "arith") return MeanKind::arithmetic();
  if (s == "harm") return MeanKind::harmonic();
  if (s.rfind("power:", 0) == 0) {
    try {
      std::size_t used = 0;
      const double t = std::stod(s.substr(6), &used);
      if (used != s.size() - 6) throw std::invalid_argument(s);
      return MeanKind::power(t);
    } catch (const std::exception&) {
      throw InputError("cannot parse power mean exponent in \"" + s + "\"");
    }
  }
  throw InputError("unknown mean kind \"" + s + "\" (karcher, arith, harm, power:t)");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  f << text;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stochastic order, Thompson metric, Wasserstein distances and matrix means on the positive-definite cone"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  std::string file, name_x, name_y, method = "flow", p_text = "1", plan_path, kind_text, out_path,
                                     experiment;
  std::vector<std::string> names, measure_names;
  double mass_tol = 1e-9, order_tol = 1e-10;
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 1;
  MeanConfig cfg;

  auto* thompson = app.add_subcommand("thompson", "Thompson distance between two named matrices");
  thompson->add_option("file", file, "dataset JSON")->required();
  thompson->add_option("x", name_x)->required();
  thompson->add_option("y", name_y)->required();

  auto* dominates = app.add_subcommand("dominates", "decide mu <= nu in the stochastic order");
  dominates->add_option("file", file, "dataset JSON")->required();
  dominates->add_option("mu", name_x)->required();
  dominates->add_option("nu", name_y)->required();
  dominates->add_option("--method", method)->check(CLI::IsMember({"flow", "enum", "both"}));
  dominates->add_option("--tol", mass_tol, "mass tolerance")->check(CLI::NonNegativeNumber);
  dominates->add_option("--order-tol", order_tol, "Loewner order slack")->check(CLI::NonNegativeNumber);

  auto* wass = app.add_subcommand("wasserstein", "p-Wasserstein distance under the Thompson metric");
  wass->add_option("file", file, "dataset JSON")->required();
  wass->add_option("mu", name_x)->required();
  wass->add_option("nu", name_y)->required();
  wass->add_option("--p", p_text, "order p >= 1, or inf");
  wass->add_option("--plan", plan_path, "write the optimal coupling as JSON");

  auto* mean = app.add_subcommand("mean", "matrix mean of named matrices, or measure mean with -m");
  mean->add_option("file", file, "dataset JSON")->required();
  mean->add_option("kind", kind_text, "karcher | arith | harm | power:t")->required();
  mean->add_option("names", names, "matrix names");
  mean->add_option("-m,--measure", measure_names, "measure name (repeatable)");
  mean->add_option("--karcher-tol", cfg.karcher_tol)->check(CLI::PositiveNumber);
  mean->add_option("--max-iter", cfg.max_iter)->check(CLI::PositiveNumber);
  mean->add_option("--product-cap", cfg.product_cap);
  mean->add_option("--mc-samples", cfg.mc_samples);
  mean->add_option("--seed", seed);

  auto* exper = app.add_subcommand("experiment", "run a seeded experiment and emit CSV");
  exper->add_option("name", experiment, "agh | pt-convergence | monotone-chain | closedness")->required();
  exper->add_option("--seed", seed, "defaults to $STOCHCONE_SEED, else 0");
  exper->add_option("--out", out_path, "CSV path (stdout if omitted)");
  exper->add_option("--jobs", jobs)->check(CLI::PositiveNumber);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  RunManifest manifest;
  manifest.command = joined(args);
  try {
    manifest.seed = seed.value_or(default_seed());
    out.precision(17);

    if (thompson->parsed()) {
      const Loaded in = load(file);
      out << format_double(thompson_distance(in.data.matrix(name_x), in.data.matrix(name_y))) << "\n";
      return kExitOk;
    }

    if (dominates->parsed()) {
      const Loaded in = load(file);
      manifest.input_hashes[file] = in.hash;
      DominanceOptions opts;
      opts.mass_tol = mass_tol;
      opts.order = OrderTolerance(order_tol);
      manifest.tolerances = {{"mass", mass_tol}, {"order", order_tol}};
      const FinMeasure& mu = in.data.measure(name_x);
      const FinMeasure& nu = in.data.measure(name_y);
      json doc;
      bool holds = false;
      if (method == "enum") {
        const DominanceVerdict v = dominates_by_upper_sets(mu, nu, opts);
        doc = verdict_to_json(v);
        holds = v.holds;
      } else {
        const DominanceVerdict v = dominates_by_coupling(mu, nu, opts);
        doc = verdict_to_json(v);
        holds = v.holds;
        if (method == "both") {
          const DominanceVerdict e = dominates_by_upper_sets(mu, nu, opts);
          doc["enum_holds"] = e.holds;
          if (e.holds != v.holds) {
            doc["manifest"] = manifest.to_json();
            out << doc.dump(2) << "\n";
            err << "coupling and upper-set deciders disagree\n";
            return kExitDisagreement;
          }
        }
      }
      doc["method"] = method;
      doc["manifest"] = manifest.to_json();
      out << doc.dump(2) << "\n";
      return holds ? kExitOk : kExitFails;
    }

    if (wass->parsed()) {
      const Loaded in = load(file);
      manifest.input_hashes[file] = in.hash;
      const FinMeasure& mu = in.data.measure(name_x);
      const FinMeasure& nu = in.data.measure(name_y);
      std::optional<WassersteinResult> r;
      if (p_text == "inf") {
        r = wasserstein_inf(mu, nu);
      } else {
        double p = 0.0;
        try {
          std::size_t used = 0;
          p = std::stod(p_text, &used);
          if (used != p_text.size()) throw std::invalid_argument(p_text);
        } catch (const std::exception&) {
          throw InputError("--p must be a number >= 1 or inf");
        }
        r = wasserstein(mu, nu, p);
      }
      out << format_double(r->distance) << "\n";
      if (!plan_path.empty()) {
        json doc = {{"p", p_text}, {"distance", r->distance}, {"plan", coupling_to_json(r->plan)},
                    {"manifest", manifest.to_json()}};
        write_text(plan_path, doc.dump(2) + "\n");
      }
      return kExitOk;
    }

    if (mean->parsed()) {
      const Loaded in = load(file);
      manifest.input_hashes[file] = in.hash;
      cfg.seed = manifest.seed;
      cfg.validate();
      manifest.tolerances = {{"karcher_tol", cfg.karcher_tol}, {"max_iter", cfg.max_iter}};
      const MeanKind kind = parse_kind(kind_text);
      json doc = {{"kind", kind.name()}};
      if (!measure_names.empty()) {
        if (!names.empty()) throw InputError("give either matrix names or -m measures, not both");
        std::vector<FinMeasure> mus;
        for (const auto& n : measure_names) mus.push_back(in.data.measure(n));
        const LiftedMean lifted = measure_mean(kind, mus, cfg);
        doc["measure"] = measure_to_json(lifted.measure);
        doc["mc_samples"] = lifted.mc_samples;
      } else {
        if (names.empty()) throw InputError("mean needs at least one matrix name or -m measure");
        std::vector<PosDefMatrix> as;
        for (const auto& n : names) as.push_back(in.data.matrix(n));
        if (kind.kind == MeanKind::Kind::kGeometric) {
          const KarcherResult k = karcher_mean(as, cfg);
          doc["matrix"] = matrix_to_json(k.mean.sym());
          doc["residual"] = k.residual;
          doc["iterations"] = k.iterations;
        } else {
          doc["matrix"] = matrix_to_json(tuple_mean(kind, as, cfg).sym());
        }
        doc["dim"] = in.data.dim;
      }
      doc["manifest"] = manifest.to_json();
      out << doc.dump(2) << "\n";
      return kExitOk;
    }

    if (exper->parsed()) {
      const ExperimentTable table = run_experiment(experiment, {manifest.seed, jobs});
      // The command line minus --out/--jobs, which do not affect the numbers.
      manifest.command = "experiment " + experiment;
      manifest.tolerances = table.tolerances;
      const std::string csv = to_csv(table, manifest);
      if (out_path.empty()) {
        out << csv;
      } else {
        write_text(out_path, csv);
      }
      return kExitOk;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace stochcone
