// Copyright 2026 The degen Authors - All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "degen/sweep.hpp"

#include "degen/entanglement.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace degen {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      std::string list;
      for (const std::string& k : allowed) list += (list.empty() ? "" : ", ") + k;
      throw ConfigError("unknown key '" + where + it.key() + "' (allowed: " + list + ")");
    }
  }
}

template <typename T>
T get(const json& obj, const std::string& key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("'" + where + key + "' has the wrong type");
  }
}

template <typename T>
void read(const json& obj, const std::string& key, T& target, const std::string& where = "") {
  if (obj.contains(key)) target = get<T>(obj, key, where);
}

std::vector<double> parse_fields(const json& node) {
  std::vector<double> out;
  if (node.is_array()) {
    for (const json& v : node) {
      if (!v.is_number()) throw ConfigError("'fields' entries must be numbers");
      out.push_back(v.get<double>());
    }
  } else if (node.is_object()) {
    reject_unknown(node, {"start", "stop", "step"}, "fields.");
    for (const char* key : {"start", "stop", "step"}) {
      if (!node.contains(key)) throw ConfigError(std::string("'fields.") + key + "' is required");
    }
    const double start = get<double>(node, "start", "fields.");
    const double stop = get<double>(node, "stop", "fields.");
    const double step = get<double>(node, "step", "fields.");
    if (!(step > 0.0)) throw ConfigError("'fields.step' must be > 0");
    if (stop < start) throw ConfigError("'fields.stop' must be >= 'fields.start'");
    const long count = std::lround(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 100000) throw ConfigError("'fields' grid has more than 100000 points");
    for (long i = 0; i < count; ++i) {
      // Round to 12 decimals so 0.1 * 3 prints as 0.3 in the outputs.
      out.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
    }
  } else {
    throw ConfigError("'fields' must be a list of numbers or {start, stop, step}");
  }
  if (out.empty()) throw ConfigError("'fields' is empty");
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!std::isfinite(out[i])) throw ConfigError("'fields' contains a non-finite value");
    if (i > 0 && !(out[i] > out[i - 1])) {
      throw ConfigError("'fields' must be strictly increasing");
    }
  }
  return out;
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string("'") + name + "' must be > 0");
}

}  // namespace

SweepConfig validate_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(doc,
                 {"model", "experiment", "n_sites", "periodic", "supercell", "geometry_file", "J",
                  "D", "dm_convention", "fields", "k", "block_size", "max_basis", "solver_tol",
                  "max_iterations", "solver_seed", "eps_deg", "near_degenerate", "ensemble",
                  "bipartition", "measurement", "ursell_form", "output_dir"},
                 "");

  SweepConfig c;
  if (!doc.contains("model")) throw ConfigError("'model' is required (ising or dmi)");
  const std::string model = get<std::string>(doc, "model", "");
  if (model == "ising") {
    c.model = Model::ising;
  } else if (model == "dmi") {
    c.model = Model::dmi;
  } else {
    throw ConfigError("'model' must be ising or dmi, got '" + model + "'");
  }
  const bool ising = c.model == Model::ising;

  // Model defaults.
  if (ising) {
    c.J = -1.0;
    c.k = 16;
    c.block_size = 8;
    c.ensemble.count = 8192;
    c.measurement.shots = 8192;
    c.measurement.axis = Axis::x;
  } else {
    c.J = -0.5;
    c.D = 1.0;
    c.k = 8;
    c.block_size = 8;
    c.ensemble.count = 22528;
    c.measurement.shots = 256;
    c.measurement.axis = Axis::z;
  }

  if (doc.contains("experiment")) {
    const std::string e = get<std::string>(doc, "experiment", "");
    if (e == "field_sweep") {
      c.experiment = Experiment::field_sweep;
    } else if (e == "basis_invariance") {
      c.experiment = Experiment::basis_invariance;
    } else {
      throw ConfigError("'experiment' must be field_sweep or basis_invariance");
    }
  }

  if (ising) {
    for (const char* key : {"supercell", "geometry_file", "D", "dm_convention"}) {
      if (doc.contains(key)) throw ConfigError(std::string("'") + key + "' applies to model dmi only");
    }
    read(doc, "n_sites", c.n_sites);
    read(doc, "periodic", c.periodic);
    if (c.n_sites < 1 || c.n_sites > 26) throw ConfigError("'n_sites' must be in [1, 26]");
  } else {
    for (const char* key : {"n_sites", "periodic"}) {
      if (doc.contains(key)) throw ConfigError(std::string("'") + key + "' applies to model ising only");
    }
    if (doc.contains("supercell")) {
      const json& sc = doc.at("supercell");
      if (!sc.is_array() || sc.size() != 2 || !sc[0].is_number_integer() || !sc[1].is_number_integer()) {
        throw ConfigError("'supercell' must be [a, b] with integers");
      }
      c.supercell_a = sc[0].get<int>();
      c.supercell_b = sc[1].get<int>();
      const int n = c.supercell_a * c.supercell_a + c.supercell_a * c.supercell_b +
                    c.supercell_b * c.supercell_b;
      if (n < 7 || n > 26) throw ConfigError("'supercell' must give 7 <= a^2 + ab + b^2 <= 26");
    }
    if (doc.contains("geometry_file")) c.geometry_file = get<std::string>(doc, "geometry_file", "");
    read(doc, "D", c.D);
    if (doc.contains("dm_convention")) {
      const std::string conv = get<std::string>(doc, "dm_convention", "");
      if (conv == "z_cross_u") {
        c.dm_convention = DmConvention::z_cross_u;
      } else if (conv == "u_cross_z") {
        c.dm_convention = DmConvention::u_cross_z;
      } else {
        throw ConfigError("'dm_convention' must be z_cross_u or u_cross_z");
      }
    }
  }
  read(doc, "J", c.J);

  if (!doc.contains("fields")) throw ConfigError("'fields' is required");
  c.fields = parse_fields(doc.at("fields"));

  read(doc, "k", c.k);
  read(doc, "block_size", c.block_size);
  read(doc, "max_basis", c.max_basis);
  read(doc, "solver_tol", c.solver_tol);
  read(doc, "max_iterations", c.max_iterations);
  read(doc, "solver_seed", c.solver_seed);
  if (c.k < 1 || c.k > 64) throw ConfigError("'k' must be in [1, 64]");
  if (c.block_size < 1 || c.block_size > 64) throw ConfigError("'block_size' must be in [1, 64]");
  if (c.max_basis != 0 && c.max_basis < c.k + 4 * c.block_size) {
    throw ConfigError("'max_basis' must be 0 (automatic) or >= k + 4 * block_size");
  }
  require_positive(c.solver_tol, "solver_tol");
  if (c.max_iterations < 1) throw ConfigError("'max_iterations' must be >= 1");
  if (doc.contains("eps_deg")) {
    c.eps_deg = get<double>(doc, "eps_deg", "");
    require_positive(*c.eps_deg, "eps_deg");
  }

  if (doc.contains("near_degenerate")) {
    const json& nd = doc.at("near_degenerate");
    if (!nd.is_object()) throw ConfigError("'near_degenerate' must be an object");
    reject_unknown(nd, {"max_field", "eps", "degree"}, "near_degenerate.");
    if (!nd.contains("max_field")) throw ConfigError("'near_degenerate.max_field' is required");
    c.near_degenerate.enabled = true;
    c.near_degenerate.max_field = get<double>(nd, "max_field", "near_degenerate.");
    if (nd.contains("eps")) {
      c.near_degenerate.eps = get<double>(nd, "eps", "near_degenerate.");
      require_positive(*c.near_degenerate.eps, "near_degenerate.eps");
    }
    if (nd.contains("degree")) {
      c.near_degenerate.degree = get<int>(nd, "degree", "near_degenerate.");
      if (*c.near_degenerate.degree < 1 || *c.near_degenerate.degree > c.k) {
        throw ConfigError("'near_degenerate.degree' must be in [1, k]");
      }
    }
    if (!c.near_degenerate.eps && !c.near_degenerate.degree) {
      throw ConfigError("'near_degenerate' needs 'eps' or 'degree'");
    }
  }

  if (doc.contains("ensemble")) {
    const json& e = doc.at("ensemble");
    if (!e.is_object()) throw ConfigError("'ensemble' must be an object");
    reject_unknown(e, {"count", "law", "master_seed", "bins", "truncation", "write_samples",
                       "compare_laws"},
                   "ensemble.");
    read(e, "count", c.ensemble.count, "ensemble.");
    if (e.contains("law")) c.ensemble.law = parse_law(get<std::string>(e, "law", "ensemble."));
    read(e, "master_seed", c.ensemble.master_seed, "ensemble.");
    read(e, "bins", c.ensemble.bins, "ensemble.");
    read(e, "truncation", c.ensemble.truncation, "ensemble.");
    read(e, "write_samples", c.ensemble.write_samples, "ensemble.");
    if (e.contains("compare_laws")) {
      if (c.experiment != Experiment::basis_invariance) {
        throw ConfigError("'ensemble.compare_laws' applies to experiment basis_invariance only");
      }
      const json& laws = e.at("compare_laws");
      if (!laws.is_array() || laws.empty()) {
        throw ConfigError("'ensemble.compare_laws' must be a non-empty list of law names");
      }
      for (const json& l : laws) {
        if (!l.is_string()) throw ConfigError("'ensemble.compare_laws' entries must be strings");
        const CoefficientLaw law = parse_law(l.get<std::string>());
        if (std::find(c.ensemble.compare_laws.begin(), c.ensemble.compare_laws.end(), law) !=
            c.ensemble.compare_laws.end()) {
          throw ConfigError("'ensemble.compare_laws' lists a law twice");
        }
        c.ensemble.compare_laws.push_back(law);
      }
    }
    if (c.ensemble.count < 1) throw ConfigError("'ensemble.count' must be >= 1");
    if (c.ensemble.bins < 1) throw ConfigError("'ensemble.bins' must be >= 1");
    if (!(c.ensemble.truncation >= 0.0) || c.ensemble.truncation > 1e-6) {
      throw ConfigError("'ensemble.truncation' must be in [0, 1e-6]");
    }
  }

  if (doc.contains("bipartition")) {
    const json& b = doc.at("bipartition");
    if (!b.is_array()) throw ConfigError("'bipartition' must be a list of site indices");
    std::vector<int> sites;
    for (const json& s : b) {
      if (!s.is_number_integer()) throw ConfigError("'bipartition' entries must be integers");
      sites.push_back(s.get<int>());
    }
    c.bipartition = sites;
  }

  if (doc.contains("measurement")) {
    const json& m = doc.at("measurement");
    if (!m.is_object()) throw ConfigError("'measurement' must be an object");
    reject_unknown(m, {"enabled", "shots", "axis", "reuse"}, "measurement.");
    read(m, "enabled", c.measurement.enabled, "measurement.");
    read(m, "shots", c.measurement.shots, "measurement.");
    read(m, "reuse", c.measurement.reuse, "measurement.");
    if (m.contains("axis")) c.measurement.axis = parse_axis(get<std::string>(m, "axis", "measurement."));
    if (c.measurement.shots < 1) throw ConfigError("'measurement.shots' must be >= 1");
    if (c.measurement.reuse < 1) throw ConfigError("'measurement.reuse' must be >= 1");
  }

  if (doc.contains("ursell_form")) {
    const std::string f = get<std::string>(doc, "ursell_form", "");
    if (f == "literal") {
      c.ursell_form = UrsellForm::literal;
    } else if (f == "symmetric") {
      c.ursell_form = UrsellForm::symmetric;
    } else {
      throw ConfigError("'ursell_form' must be literal or symmetric");
    }
  }
  if (doc.contains("output_dir")) c.output_dir = get<std::string>(doc, "output_dir", "");

  const int n = ising ? c.n_sites
                      : c.supercell_a * c.supercell_a + c.supercell_a * c.supercell_b +
                            c.supercell_b * c.supercell_b;
  if (!c.geometry_file && static_cast<double>(c.k) > std::ldexp(1.0, n)) {
    throw ConfigError("'k' exceeds the Hilbert-space dimension 2^" + std::to_string(n));
  }
  if (c.bipartition && !c.geometry_file) {
    BipartitionMask check(n, *c.bipartition);  // throws ConfigError
    (void)check;
  }
  return c;
}

SweepConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  SweepConfig c = validate_config(buffer.str());
  // Relative geometry paths are resolved against the config's directory.
  if (c.geometry_file && c.geometry_file->is_relative()) {
    c.geometry_file = path.parent_path() / *c.geometry_file;
  }
  return c;
}

std::string config_to_json(const SweepConfig& c) {
  json doc;
  const bool ising = c.model == Model::ising;
  doc["model"] = ising ? "ising" : "dmi";
  doc["experiment"] = c.experiment == Experiment::field_sweep ? "field_sweep" : "basis_invariance";
  if (ising) {
    doc["n_sites"] = c.n_sites;
    doc["periodic"] = c.periodic;
  } else {
    doc["supercell"] = {c.supercell_a, c.supercell_b};
    if (c.geometry_file) doc["geometry_file"] = c.geometry_file->string();
    doc["D"] = c.D;
    doc["dm_convention"] = c.dm_convention == DmConvention::z_cross_u ? "z_cross_u" : "u_cross_z";
  }
  doc["J"] = c.J;
  doc["fields"] = c.fields;
  doc["k"] = c.k;
  doc["block_size"] = c.block_size;
  doc["max_basis"] = c.max_basis;
  doc["solver_tol"] = c.solver_tol;
  doc["max_iterations"] = c.max_iterations;
  doc["solver_seed"] = c.solver_seed;
  if (c.eps_deg) doc["eps_deg"] = *c.eps_deg;
  if (c.near_degenerate.enabled) {
    json nd;
    nd["max_field"] = c.near_degenerate.max_field;
    if (c.near_degenerate.eps) nd["eps"] = *c.near_degenerate.eps;
    if (c.near_degenerate.degree) nd["degree"] = *c.near_degenerate.degree;
    doc["near_degenerate"] = nd;
  }
  doc["ensemble"] = {{"count", c.ensemble.count},
                     {"law", law_name(c.ensemble.law)},
                     {"master_seed", c.ensemble.master_seed},
                     {"bins", c.ensemble.bins},
                     {"truncation", c.ensemble.truncation},
                     {"write_samples", c.ensemble.write_samples}};
  if (!c.ensemble.compare_laws.empty()) {
    json laws = json::array();
    for (CoefficientLaw l : c.ensemble.compare_laws) laws.push_back(law_name(l));
    doc["ensemble"]["compare_laws"] = laws;
  }
  if (c.bipartition) doc["bipartition"] = *c.bipartition;
  doc["measurement"] = {{"enabled", c.measurement.enabled},
                        {"shots", c.measurement.shots},
                        {"axis", std::string(1, axis_name(c.measurement.axis))},
                        {"reuse", c.measurement.reuse}};
  doc["ursell_form"] = c.ursell_form == UrsellForm::literal ? "literal" : "symmetric";
  if (c.output_dir) doc["output_dir"] = c.output_dir->string();
  return doc.dump(2);
}

}  // namespace degen
