#include "stochcone/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "stochcone/error.hpp"

namespace stochcone {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json matrix_to_json(const SymMatrix& m) {
  json arr = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) arr.push_back(m(i, j));
  }
  return arr;
}

PosDefMatrix matrix_from_json(const json& j, std::size_t dim) {
  if (!j.is_array()) throw InputError("matrix must be a flat array of numbers");
  std::vector<double> entries;
  entries.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_number()) throw InputError("matrix entries must be numbers");
    entries.push_back(e.get<double>());
  }
  if (entries.size() != dim * dim) {
    throw InputError("matrix has " + std::to_string(entries.size()) + " entries, expected " +
                     std::to_string(dim * dim));
  }
  try {
    return PosDefMatrix(SymMatrix::from_row_major(dim, entries));
  } catch (const Error& e) {
    throw InputError(e.what());
  }
}

json measure_to_json(const FinMeasure& mu) {
  json atoms = json::array();
  for (const auto& a : mu.atoms()) {
    atoms.push_back({{"weight", a.weight}, {"matrix", matrix_to_json(a.point.sym())}});
  }
  return {{"dim", mu.dim()}, {"atoms", atoms}};
}

FinMeasure measure_from_json(const json& j, std::size_t dim) {
  if (!j.is_object()) throw InputError("measure must be a JSON object");
  if (j.contains("dim")) {
    if (!j["dim"].is_number_unsigned()) throw InputError("measure dim must be a positive integer");
    const auto d = j["dim"].get<std::size_t>();
    if (dim != 0 && d != dim) throw InputError("measure dim disagrees with dataset dim");
    dim = d;
  }
  if (dim == 0) throw InputError("measure needs a positive dim");
  if (!j.contains("atoms") || !j["atoms"].is_array() || j["atoms"].empty()) {
    throw InputError("measure needs a nonempty \"atoms\" array");
  }
  std::vector<std::pair<PosDefMatrix, double>> pairs;
  for (const auto& a : j["atoms"]) {
    if (!a.is_object() || !a.contains("weight") || !a.contains("matrix") || !a["weight"].is_number()) {
      throw InputError("each atom needs a numeric \"weight\" and a \"matrix\"");
    }
    pairs.emplace_back(matrix_from_json(a["matrix"], dim), a["weight"].get<double>());
  }
  return FinMeasure::from_atoms(pairs);
}

json coupling_to_json(const Coupling& c) {
  json rows = json::array();
  for (std::size_t i = 0; i < c.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < c.cols(); ++j) {
      row.push_back(c.weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    rows.push_back(row);
  }
  return rows;
}

json verdict_to_json(const DominanceVerdict& v) {
  json cert;
  if (const Coupling* c = v.coupling()) {
    cert = {{"type", "coupling"}, {"rows", c->rows()}, {"cols", c->cols()}, {"weights", coupling_to_json(*c)}};
  } else if (const UpperSetViolation* u = v.violation()) {
    json support = json::array();
    for (const auto& p : u->support) support.push_back(matrix_to_json(p.sym()));
    cert = {{"type", "upper_set"},
            {"members", u->set.members},
            {"support", support},
            {"mu_mass", u->mu_mass},
            {"nu_mass", u->nu_mass}};
  } else {
    cert = {{"type", "audit"}, {"upper_sets_checked", std::get<UpperSetAudit>(v.certificate).sets_checked}};
  }
  return {{"holds", v.holds}, {"certificate", cert}};
}

const PosDefMatrix& Dataset::matrix(const std::string& name) const {
  const auto it = matrices.find(name);
  if (it == matrices.end()) throw InputError("no matrix named \"" + name + "\" in dataset");
  return it->second;
}

const FinMeasure& Dataset::measure(const std::string& name) const {
  const auto it = measures.find(name);
  if (it == measures.end()) throw InputError("no measure named \"" + name + "\" in dataset");
  return it->second;
}

Dataset dataset_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_unsigned() || j["dim"].get<std::size_t>() == 0) {
    throw InputError("dataset needs a positive integer \"dim\"");
  }
  Dataset ds;
  ds.dim = j["dim"].get<std::size_t>();
  if (j.contains("matrices")) {
    if (!j["matrices"].is_object()) throw InputError("\"matrices\" must be an object");
    for (const auto& [name, m] : j["matrices"].items()) {
      try {
        ds.matrices.emplace(name, matrix_from_json(m, ds.dim));
      } catch (const Error& e) {
        throw InputError("matrix \"" + name + "\": " + e.what());
      }
    }
  }
  if (j.contains("measures")) {
    if (!j["measures"].is_object()) throw InputError("\"measures\" must be an object");
    for (const auto& [name, m] : j["measures"].items()) {
      try {
        ds.measures.emplace(name, measure_from_json(m, ds.dim));
      } catch (const Error& e) {
        throw InputError("measure \"" + name + "\": " + e.what());
      }
    }
  }
  return ds;
}

json dataset_to_json(const Dataset& d) {
  json mats = json::object();
  for (const auto& [name, m] : d.matrices) mats[name] = matrix_to_json(m.sym());
  json meas = json::object();
  for (const auto& [name, mu] : d.measures) meas[name] = measure_to_json(mu);
  return {{"dim", d.dim}, {"matrices", mats}, {"measures", meas}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Dataset load_dataset(const std::string& path) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("malformed JSON in " + path + ": " + e.what());
  }
  return dataset_from_json(j);
}

json RunManifest::to_json() const {
  return {{"command", command},
          {"seed", seed},
          {"tolerances", tolerances},
          {"inputs", input_hashes},
          {"version", version}};
}

}  // namespace stochcone
