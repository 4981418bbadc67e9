#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "curvmax/errors.hpp"
#include "curvmax/matroid.hpp"
#include "curvmax/search.hpp"
#include "curvmax/set_function.hpp"
#include "curvmax/verify.hpp"

namespace curvmax {

using json = nlohmann::ordered_json;

struct LoadOptions {
  bool validate = false;  // monotonicity/submodularity scan for table functions
  int validation_cap = 14;
  int table_cap = 20;
};

struct Instance {
  std::shared_ptr<const SetFunction> f;
  std::optional<Matroid> matroid;
  std::optional<std::vector<double>> l_weights;
  std::vector<std::string> warnings;
};

namespace io_detail {

inline const json& require(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw InputError(where + ": missing field '" + key + "'");
  }
  return j.at(key);
}

inline int require_int(const json& j, const std::string& key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_number_integer()) throw InputError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

inline std::vector<double> require_numbers(const json& j, const std::string& key,
                                           const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_array()) throw InputError(where + "." + key + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      throw InputError(where + "." + key + "[" + std::to_string(i) + "]: expected a number");
    }
    out.push_back(v[i].get<double>());
  }
  return out;
}

inline std::vector<std::vector<int>> require_id_lists(const json& j, const std::string& key,
                                                      const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_array()) throw InputError(where + "." + key + ": expected an array of id arrays");
  std::vector<std::vector<int>> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_array()) {
      throw InputError(where + "." + key + "[" + std::to_string(i) + "]: expected an array");
    }
    std::vector<int> row;
    for (const auto& x : v[i]) {
      if (!x.is_number_integer()) {
        throw InputError(where + "." + key + "[" + std::to_string(i) + "]: ids must be integers");
      }
      row.push_back(x.get<int>());
    }
    out.push_back(std::move(row));
  }
  return out;
}

inline SetFunction parse_function(const json& spec, int n, const LoadOptions& opts,
                                  std::vector<std::string>& warnings) {
  const std::string where = "function";
  const json& type = require(spec, "type", where);
  if (!type.is_string()) throw InputError("function.type: expected a string");
  const std::string kind = type.get<std::string>();

  if (kind == "modular") {
    auto weights = require_numbers(spec, "weights", where);
    if (weights.size() != static_cast<std::size_t>(n)) {
      throw InputError("function.weights: expected " + std::to_string(n) + " entries");
    }
    return SetFunction::modular(std::move(weights));
  }
  if (kind == "coverage") {
    auto item_weights = require_numbers(spec, "universe_weights", where);
    auto sets = require_id_lists(spec, "sets", where);
    if (sets.size() != static_cast<std::size_t>(n)) {
      throw InputError("function.sets: expected " + std::to_string(n) + " entries");
    }
    return SetFunction::coverage(std::move(item_weights), std::move(sets));
  }
  if (kind == "facility_location") {
    const json& rows = require(spec, "weights", where);
    if (!rows.is_array() || rows.empty()) {
      throw InputError("function.weights: expected a non-empty client x facility matrix");
    }
    std::vector<std::vector<double>> gains;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (!rows[r].is_array() || rows[r].size() != static_cast<std::size_t>(n)) {
        throw InputError("function.weights[" + std::to_string(r) + "]: expected " +
                         std::to_string(n) + " numbers");
      }
      std::vector<double> row;
      for (const auto& x : rows[r]) {
        if (!x.is_number()) {
          throw InputError("function.weights[" + std::to_string(r) + "]: entries must be numbers");
        }
        row.push_back(x.get<double>());
      }
      gains.push_back(std::move(row));
    }
    return SetFunction::facility_location(std::move(gains));
  }
  if (kind == "table") {
    if (n > opts.table_cap) {
      throw ResourceError("function.table: n = " + std::to_string(n) + " above table cap " +
                          std::to_string(opts.table_cap));
    }
    const json& values = require(spec, "values", where);
    if (!values.is_object()) {
      throw InputError("function.values: expected an object keyed by decimal subset bitmasks");
    }
    const std::size_t size = std::size_t{1} << n;
    std::vector<double> table(size, std::numeric_limits<double>::quiet_NaN());
    for (const auto& [key, value] : values.items()) {
      std::size_t pos = 0;
      unsigned long long mask = 0;
      try {
        mask = std::stoull(key, &pos);
      } catch (const std::exception&) {
        throw InputError("function.values: key '" + key + "' is not a decimal bitmask");
      }
      if (pos != key.size() || mask >= size) {
        throw InputError("function.values: key '" + key + "' outside [0," + std::to_string(size) +
                         ")");
      }
      if (!value.is_number()) {
        throw InputError("function.values['" + key + "']: expected a number");
      }
      table[mask] = value.get<double>();
    }
    for (std::size_t mask = 0; mask < size; ++mask) {
      if (std::isnan(table[mask])) {
        throw InputError("function.values: missing subset key '" + std::to_string(mask) + "'");
      }
    }
    bool shifted = false;
    SetFunction f = SetFunction::table(n, std::move(table), &shifted);
    if (shifted) {
      warnings.push_back("table values shifted so that f(empty) = 0");
    }
    if (opts.validate) {
      if (n > opts.validation_cap) {
        warnings.push_back("table validation skipped: n above validation cap " +
                           std::to_string(opts.validation_cap));
      } else {
        const double tol = kRatioTol * std::max(1.0, f.scale());
        auto eval = [&f](ElementSet s) { return f.eval(s); };
        if (auto bad = monotonicity_violation(eval, n, tol)) {
          throw InputError("function.values: not monotone, f decreases adding element " +
                           std::to_string(bad->second) + " to " + bad->first.to_string());
        }
        if (auto bad = submodularity_violation(eval, n, tol)) {
          throw InputError("function.values: not submodular at S=" + bad->first.to_string() +
                           " T=" + bad->second.to_string());
        }
      }
    }
    return f;
  }
  throw InputError("function.type: unknown kind '" + kind + "'");
}

inline Matroid parse_matroid(const json& spec, int n) {
  const std::string where = "matroid";
  const json& type = require(spec, "type", where);
  if (!type.is_string()) throw InputError("matroid.type: expected a string");
  const std::string kind = type.get<std::string>();

  if (kind == "uniform") {
    return Matroid::uniform(n, require_int(spec, "rank", where));
  }
  if (kind == "partition") {
    auto blocks = require_id_lists(spec, "blocks", where);
    const json& caps = require(spec, "capacities", where);
    if (!caps.is_array()) throw InputError("matroid.capacities: expected an array of integers");
    std::vector<int> capacities;
    for (const auto& c : caps) {
      if (!c.is_number_integer()) throw InputError("matroid.capacities: entries must be integers");
      capacities.push_back(c.get<int>());
    }
    return Matroid::partition(n, blocks, std::move(capacities));
  }
  if (kind == "graphic") {
    const int vertices = require_int(spec, "vertices", where);
    auto lists = require_id_lists(spec, "edges", where);
    if (lists.size() != static_cast<std::size_t>(n)) {
      throw InputError("matroid.edges: expected " + std::to_string(n) + " edges");
    }
    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 0; i < lists.size(); ++i) {
      if (lists[i].size() != 2) {
        throw InputError("matroid.edges[" + std::to_string(i) + "]: expected [u, v]");
      }
      edges.emplace_back(lists[i][0], lists[i][1]);
    }
    return Matroid::graphic(vertices, std::move(edges));
  }
  if (kind == "explicit_bases") {
    auto lists = require_id_lists(spec, "bases", where);
    std::vector<ElementSet> bases;
    for (const auto& ids : lists) {
      ElementSet b;
      for (int e : ids) {
        require_in_ground(e, n, "matroid.bases");
        b = b.with(e);
      }
      bases.push_back(b);
    }
    return Matroid::explicit_bases(n, std::move(bases));
  }
  throw InputError("matroid.type: unknown kind '" + kind + "'");
}

}  // namespace io_detail

inline Instance parse_instance(const json& j, const LoadOptions& opts = {}) {
  Instance inst;
  const int n = io_detail::require_int(j, "ground_set", "instance");
  if (n < 1 || n > kMaxGroundSize) {
    throw InputError("instance.ground_set: must lie in [1,64]");
  }
  inst.f = std::make_shared<SetFunction>(
      io_detail::parse_function(io_detail::require(j, "function", "instance"), n, opts,
                                inst.warnings));
  inst.matroid = io_detail::parse_matroid(io_detail::require(j, "matroid", "instance"), n);
  if (j.contains("l_weights")) {
    auto weights = io_detail::require_numbers(j, "l_weights", "instance");
    if (weights.size() != static_cast<std::size_t>(n)) {
      throw InputError("instance.l_weights: expected " + std::to_string(n) + " entries");
    }
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (!std::isfinite(weights[i]) || weights[i] < 0.0) {
        throw InputError("instance.l_weights[" + std::to_string(i) + "]: must be finite and >= 0");
      }
    }
    inst.l_weights = std::move(weights);
  }
  return inst;
}

inline Instance load_instance(const std::filesystem::path& path, const LoadOptions& opts = {}) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open instance file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("instance file " + path.string() + ": " + e.what());
  }
  return parse_instance(j, opts);
}

// ---------------------------------------------------------------------------
// Report serialization.
// ---------------------------------------------------------------------------

inline json report_to_json(const RunReport& report) {
  json j;
  j["solution"] = report.solution.to_vector();
  j["f_value"] = report.f_value;
  j["phi_value"] = report.phi_value;
  if (report.kappa) {
    j["kappa"] = *report.kappa;
  } else {
    j["kappa"] = nullptr;
  }
  j["ell"] = report.ell;
  j["gamma"] = report.gamma;
  j["epsilon"] = report.epsilon;
  j["theta"] = report.theta;
  j["guarantee_bound"] = report.guarantee;
  j["iterations"] = report.iterations;
  j["oracle_calls"] = report.oracle_calls;
  j["converged"] = report.converged;
  j["wall_time_ms"] = report.wall_time_ms;
  json lifted = json::array();
  for (const LiftedElement p : report.lifted.pairs()) {
    lifted.push_back(json::array({p.element, p.color}));
  }
  j["lifted"] = lifted;
  if (!report.trace.empty()) {
    json trace = json::array();
    for (const TraceEntry& t : report.trace) {
      trace.push_back({{"out", json::array({t.out.element, t.out.color})},
                       {"in", json::array({t.in.element, t.in.color})},
                       {"delta", t.delta},
                       {"phi_after", t.phi_after}});
    }
    j["trace"] = trace;
  }
  return j;
}

inline json inequality_check_to_json(const InequalityCheckReport& report) {
  json j;
  j["lhs"] = report.lhs;
  j["rhs"] = report.rhs;
  j["bracket"] = report.bracket;
  j["slack_allow"] = report.slack_allow;
  j["pass"] = report.pass;
  if (report.skipped) j["skipped"] = *report.skipped;
  json details = json::array();
  for (const ColorDetail& d : report.details) {
    details.push_back(
        {{"color", d.color}, {"bracket", d.bracket}, {"identity_residual", d.identity_residual}});
  }
  j["per_color"] = details;
  return j;
}

inline json decomposition_check_to_json(const DecompositionCheckReport& report) {
  json j;
  j["identity_ok"] = report.identity_ok;
  j["monotone_ok"] = report.monotone_ok;
  j["submodular_ok"] = report.submodular_ok;
  j["bound_ok"] = report.bound_ok;
  j["violations"] = report.violations;
  j["pass"] = report.pass();
  return j;
}

inline json ratio_check_to_json(const RatioCheckReport& report) {
  json j;
  j["f_value"] = report.f_value;
  j["opt_value"] = report.opt_value;
  j["bound"] = report.bound;
  j["ratio"] = report.ratio;
  j["pass"] = report.pass;
  return j;
}

}  // namespace curvmax
