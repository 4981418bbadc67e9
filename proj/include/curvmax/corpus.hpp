#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "curvmax/set_function.hpp"

namespace curvmax {

struct NamedInstance {
  std::string name;
  nlohmann::ordered_json spec;
};

namespace corpus_detail {

using nlohmann::ordered_json;

inline ordered_json instance(int n, ordered_json function, ordered_json matroid) {
  ordered_json j;
  j["ground_set"] = n;
  j["function"] = std::move(function);
  j["matroid"] = std::move(matroid);
  return j;
}

inline ordered_json modular(std::vector<double> weights) {
  return ordered_json{{"type", "modular"}, {"weights", weights}};
}

inline ordered_json coverage(std::vector<double> item_weights,
                             std::vector<std::vector<int>> sets) {
  return ordered_json{
      {"type", "coverage"}, {"universe_weights", item_weights}, {"sets", sets}};
}

inline ordered_json facility(std::vector<std::vector<double>> rows) {
  return ordered_json{{"type", "facility_location"}, {"weights", rows}};
}

inline ordered_json table_values(int n, const std::vector<double>& values) {
  if (values.size() != (std::size_t{1} << n)) {
    throw InputError("corpus table: value count does not match ground size");
  }
  ordered_json map = ordered_json::object();
  for (std::size_t mask = 0; mask < values.size(); ++mask) {
    map[std::to_string(mask)] = values[mask];
  }
  return ordered_json{{"type", "table"}, {"values", std::move(map)}};
}

// Budget-capped modular table f(S) = min(sum of weights, budget): monotone
// submodular with curvature set by how deep the cap bites.
inline ordered_json budget_table(const std::vector<double>& weights, double budget) {
  const int n = static_cast<int>(weights.size());
  std::vector<double> values(std::size_t{1} << n);
  for (std::size_t mask = 0; mask < values.size(); ++mask) {
    double sum = 0.0;
    for (int e = 0; e < n; ++e) {
      if (mask & (std::size_t{1} << e)) sum += weights[static_cast<std::size_t>(e)];
    }
    values[mask] = std::min(sum, budget);
  }
  return table_values(n, values);
}

// Materializes any built-in oracle as an explicit table.
inline ordered_json tabulate(const SetFunction& f) {
  const int n = f.ground_size();
  std::vector<double> values(std::size_t{1} << n);
  for (std::size_t mask = 0; mask < values.size(); ++mask) {
    values[mask] = f.eval(ElementSet(mask));
  }
  return table_values(n, values);
}

// Each element covers two private unit-ish items plus one globally shared
// item; curvature is shared / (2 * private + shared) exactly.
inline ordered_json shared_item_coverage(int n, double private_w, double shared_w) {
  std::vector<double> item_weights(static_cast<std::size_t>(2 * n), private_w);
  item_weights.push_back(shared_w);
  std::vector<std::vector<int>> sets;
  for (int e = 0; e < n; ++e) sets.push_back({2 * e, 2 * e + 1, 2 * n});
  return coverage(std::move(item_weights), std::move(sets));
}

// Clients prefer their own facility at gain `diag`, any other at `off`;
// curvature is 1 - (diag - off) / (diag + (n-1) * off).
inline ordered_json diagonal_facility(int n, double diag, double off) {
  std::vector<std::vector<double>> rows;
  for (int c = 0; c < n; ++c) {
    std::vector<double> row(static_cast<std::size_t>(n), off);
    row[static_cast<std::size_t>(c)] = diag;
    rows.push_back(std::move(row));
  }
  return facility(std::move(rows));
}

inline ordered_json uniform(int rank) { return ordered_json{{"type", "uniform"}, {"rank", rank}}; }

inline ordered_json partition(std::vector<std::vector<int>> blocks, std::vector<int> caps) {
  return ordered_json{{"type", "partition"}, {"blocks", blocks}, {"capacities", caps}};
}

inline ordered_json graphic(int vertices, std::vector<std::vector<int>> edges) {
  return ordered_json{{"type", "graphic"}, {"vertices", vertices}, {"edges", edges}};
}

}  // namespace corpus_detail

// Fixed desk-scale instance corpus: every function family and matroid kind,
// curvature spanning 0, 0.3, 0.5, 0.7 and 1, all with n <= 10 so brute force
// stays exact. The list is deterministic; the CLI's gen-corpus command writes
// it out and the shipped corpus/ directory is exactly this list.
inline std::vector<NamedInstance> builtin_corpus() {
  using namespace corpus_detail;
  std::vector<NamedInstance> out;
  auto add = [&out](const std::string& name, ordered_json spec) {
    out.push_back({name, std::move(spec)});
  };

  // Modular objectives, curvature 0.
  add("i01_modular_uniform_n3", instance(3, modular({1, 2, 3}), uniform(2)));
  add("i02_modular_uniform_n6", instance(6, modular({5, 1, 4, 2, 3, 6}), uniform(3)));
  add("i03_modular_partition_n4",
      instance(4, modular({1, 2, 3, 4}), partition({{0, 1}, {2, 3}}, {1, 1})));
  add("i04_modular_partition_n6",
      instance(6, modular({2, 2, 7, 3, 1, 5}), partition({{0, 1, 2}, {3, 4, 5}}, {2, 1})));
  add("i05_modular_graphic_tri",
      instance(3, modular({1, 3, 2}), graphic(3, {{0, 1}, {1, 2}, {0, 2}})));
  add("i06_modular_graphic_k4",
      instance(6, modular({4, 1, 2, 6, 3, 5}),
               graphic(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}})));

  // Two-element tables with dialed-in curvature 2 - f({0,1}).
  add("i07_table2_k03_rank1", instance(2, table_values(2, {0, 1, 1, 1.7}), uniform(1)));
  add("i08_table2_k05_rank1", instance(2, table_values(2, {0, 1, 1, 1.5}), uniform(1)));
  add("i09_table2_k07_rank1", instance(2, table_values(2, {0, 1, 1, 1.3}), uniform(1)));
  add("i10_table2_k10_rank1", instance(2, table_values(2, {0, 1, 1, 1.0}), uniform(1)));
  add("i11_table2_k05_rank2", instance(2, table_values(2, {0, 1, 1, 1.5}), uniform(2)));

  // Budget-capped modular tables; with unit weights and total W the curvature
  // is 1 - (budget - (W - 1)).
  add("i12_budget_k03_uniform_n5", instance(5, budget_table({1, 1, 1, 1, 1}, 4.7), uniform(2)));
  add("i13_budget_k05_uniform_n5", instance(5, budget_table({1, 1, 1, 1, 1}, 4.5), uniform(3)));
  add("i14_budget_k07_uniform_n5", instance(5, budget_table({1, 1, 1, 1, 1}, 4.3), uniform(2)));
  add("i15_budget_k10_uniform_n5", instance(5, budget_table({1, 1, 1, 1, 1}, 3.0), uniform(3)));
  add("i16_budget_k05_partition_n6",
      instance(6, budget_table({1, 1, 1, 1, 1, 1}, 5.5), partition({{0, 1, 2}, {3, 4, 5}}, {2, 2})));
  add("i17_budget_k07_graphic_n5",
      instance(5, budget_table({1, 1, 1, 1, 1}, 4.3),
               graphic(4, {{0, 1}, {1, 2}, {2, 3}, {0, 2}, {1, 3}})));
  add("i33_budget_k10_partition_n6",
      instance(6, budget_table({1, 1, 1, 1, 1, 1}, 4.0), partition({{0, 1, 2}, {3, 4, 5}}, {2, 2})));

  // Coverage.
  add("i18_coverage_disjoint_n4",
      instance(4, coverage({1, 1, 1, 1, 1, 1, 1, 1}, {{0, 1}, {2, 3}, {4, 5}, {6, 7}}),
               uniform(2)));
  add("i19_coverage_dup_rank1_n2", instance(2, coverage({1, 1}, {{0, 1}, {1}}), uniform(1)));
  add("i20_coverage_dup_partition_n6",
      instance(6,
               coverage({1, 1, 1, 1, 1, 1},
                        {{0, 1}, {0, 1}, {2, 3}, {2, 3}, {4, 5}, {4, 5}}),
               partition({{0, 1}, {2, 3}, {4, 5}}, {1, 1, 1})));
  add("i21_coverage_shared_k03_n4", instance(4, shared_item_coverage(4, 7, 6), uniform(2)));
  add("i22_coverage_shared_k05_n6",
      instance(6, shared_item_coverage(6, 1, 2), partition({{0, 1, 2}, {3, 4, 5}}, {1, 2})));
  add("i23_coverage_shared_k07_n4",
      instance(4, shared_item_coverage(4, 3, 14), graphic(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}})));
  add("i29_coverage_chain_n8",
      instance(8,
               coverage({2, 1, 3, 1, 2, 1, 3, 1, 2, 4},
                        {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8, 9}}),
               partition({{0, 1, 2, 3}, {4, 5, 6, 7}}, {2, 2})));
  add("i30_coverage_chain_n7_uniform",
      instance(7, coverage({1, 1, 1, 1, 1, 1, 1, 1},
                           {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}}),
               uniform(3)));
  add("i35_coverage_big_n10", [] {
    std::vector<std::vector<int>> sets;
    for (int e = 0; e < 10; ++e) sets.push_back({e, (e + 1) % 12, (e + 5) % 12});
    return instance(10, coverage(std::vector<double>(12, 1.0), sets), uniform(4));
  }());
  // Oblivious local search started from the first base stalls at {0,1} here;
  // the optimum {2,3} needs a guided escape.
  add("i36_coverage_stall_n4",
      instance(4, coverage({1, 1, 1, 1, 1, 1}, {{0, 1}, {2, 3}, {0, 2, 4}, {1, 3, 5}}),
               uniform(2)));
  // Greedy trap: the id tie-break grabs element 0, element 2 then duplicates
  // its item, value 1. The optimum {1,2} is worth 1.9 and only a swap reaches it.
  add("i37_coverage_greedy_trap_n3",
      instance(3, coverage({1.0, 0.9}, {{0}, {1}, {0}}), partition({{0, 1}, {2}}, {1, 1})));

  // Facility location.
  add("i24_facloc_k03_n4", instance(4, diagonal_facility(4, 31, 3), uniform(2)));
  add("i25_facloc_k05_n4",
      instance(4, diagonal_facility(4, 1.0, 0.2), partition({{0, 1}, {2, 3}}, {1, 1})));
  add("i26_facloc_k07_n4",
      instance(4, diagonal_facility(4, 19, 7), graphic(4, {{0, 1}, {1, 2}, {2, 3}, {0, 2}})));
  add("i27_facloc_identical_n4",
      instance(4, facility({{1, 1, 1, 1}, {2, 2, 2, 2}, {3, 3, 3, 3}, {4, 4, 4, 4}}), uniform(2)));
  add("i28_facloc_diag_n4", instance(4, diagonal_facility(4, 3, 0), uniform(2)));
  add("i31_facloc_n6_partition",
      instance(6,
               facility({{9, 7, 0, 2, 0, 3},
                         {0, 8, 6, 0, 4, 0},
                         {5, 0, 7, 6, 0, 2},
                         {0, 3, 0, 8, 7, 0},
                         {4, 0, 2, 0, 6, 9}}),
               partition({{0, 1, 2}, {3, 4, 5}}, {2, 1})));

  // Tabulated coverage (table kind with non-trivial structure).
  add("i32_table_coverage_n5_graphic", [] {
    SetFunction f = SetFunction::coverage({2, 1, 1, 2, 1, 1},
                                          {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
    return instance(5, tabulate(f), graphic(4, {{0, 1}, {1, 2}, {2, 3}, {0, 2}, {1, 3}}));
  }());

  // Zero-weight elements exercise the curvature minimum's singleton filter.
  add("i34_modular_zero_weights_n4", instance(4, modular({0, 2, 0, 5}), uniform(2)));

  std::sort(out.begin(), out.end(),
            [](const NamedInstance& a, const NamedInstance& b) { return a.name < b.name; });
  return out;
}

}  // namespace curvmax
