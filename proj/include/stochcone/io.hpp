#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

#include "stochcone/coupling.hpp"
#include "stochcone/measure.hpp"
#include "stochcone/order.hpp"

namespace stochcone {

using json = nlohmann::json;

inline constexpr std::string_view kToolVersion = "0.1.0";

/// 17 significant digits, "%.17g".
std::string format_double(double x);

/// FNV-1a 64-bit hash as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

json matrix_to_json(const SymMatrix& m);  // d*d row-major array
PosDefMatrix matrix_from_json(const json& j, std::size_t dim);

/// {"dim": d, "atoms": [{"weight": w, "matrix": [...]}]}
json measure_to_json(const FinMeasure& mu);
/// Accepts the schema above; "dim" may be omitted when `dim` is given.
FinMeasure measure_from_json(const json& j, std::size_t dim = 0);

json coupling_to_json(const Coupling& c);

/// {"holds": bool, "certificate": {"type": "coupling" | "upper_set" | "audit", ...}}
json verdict_to_json(const DominanceVerdict& v);

/// Named matrices and measures sharing one dimension:
/// {"dim": d, "matrices": {name: [...]}, "measures": {name: {"atoms": [...]}}}
struct Dataset {
  std::size_t dim = 0;
  std::map<std::string, PosDefMatrix> matrices;
  std::map<std::string, FinMeasure> measures;

  const PosDefMatrix& matrix(const std::string& name) const;
  const FinMeasure& measure(const std::string& name) const;
};

Dataset dataset_from_json(const json& j);
json dataset_to_json(const Dataset& d);

/// Reads and parses a file; throws InputError on I/O or JSON errors.
std::string read_file(const std::string& path);
Dataset load_dataset(const std::string& path);

/// Provenance block written into every output.
struct RunManifest {
  std::string command;
  std::uint64_t seed = 0;
  json tolerances = json::object();
  std::map<std::string, std::string> input_hashes;
  std::string version{kToolVersion};

  json to_json() const;
};

}  // namespace stochcone
