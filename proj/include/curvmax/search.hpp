#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "curvmax/element_set.hpp"
#include "curvmax/errors.hpp"
#include "curvmax/lifted.hpp"
#include "curvmax/matroid.hpp"
#include "curvmax/parallel.hpp"
#include "curvmax/potential.hpp"
#include "curvmax/set_function.hpp"

namespace curvmax {

struct SearchConfig {
  double epsilon = 0.1;
  int ell = 0;           // 0 = choose via smallest_ell
  double gamma = 1.0;
  std::int64_t max_iterations = 1'000'000;
  bool record_trace = false;
  int threads = 1;       // 0 = hardware concurrency
  int ell_cap = 0;       // 0 = default_ell_cap()
};

struct TraceEntry {
  LiftedElement out;
  LiftedElement in;
  double delta;
  double phi_after;
};

struct RunReport {
  ElementSet solution;                 // pi_[ell] of the lifted solution
  LiftedSolution lifted{1};
  double f_value = 0.0;
  double phi_value = 0.0;
  std::optional<double> kappa;
  int ell = 1;
  double gamma = 1.0;
  double epsilon = 0.0;
  double theta = 0.0;
  double guarantee = 0.0;              // certified value/OPT lower bound
  std::int64_t iterations = 0;
  std::uint64_t oracle_calls = 0;
  bool converged = true;
  double wall_time_ms = 0.0;
  std::vector<TraceEntry> trace;
};

// Base built by repeatedly adding the feasible element of largest marginal,
// ties to the smallest id. If no marginal is positive the base is completed
// by smallest-id feasible additions (value-neutral for monotone f).
inline ElementSet greedy(const SetFunction& f, const Matroid& m) {
  ElementSet s;
  while (true) {
    int best = -1;
    double best_gain = 0.0;
    for (int e = 0; e < m.ground_size(); ++e) {
      if (s.contains(e) || !m.is_independent(s.with(e))) continue;
      const double gain = f.marginal(e, s);
      if (gain > best_gain) {
        best = e;
        best_gain = gain;
      } else if (best == -1) {
        best = e;  // smallest-id fallback when nothing improves
      }
    }
    if (best == -1) return s;
    s = s.with(best);
  }
}

// Lexicographically first base: greedy augmentation in id order. The oblivious
// baseline starts here so it gets no guidance at all.
inline ElementSet first_base(const Matroid& m) {
  ElementSet s;
  for (int e = 0; e < m.ground_size(); ++e) {
    if (m.is_independent(s.with(e))) s = s.with(e);
  }
  return s;
}

namespace detail {

struct SwapCandidate {
  LiftedElement out;
  LiftedElement in;
};

// All feasible lifted swaps from S, in lexicographic (out, in) order:
// out in S, in outside S, S - out + in colorful with independent projection.
// Recolorings (same element, new color) are included.
inline std::vector<SwapCandidate> feasible_swaps(const LiftedSolution& s, const Matroid& m,
                                                 int ell) {
  std::vector<SwapCandidate> swaps;
  const ElementSet support = s.support();
  for (const LiftedElement out : s.pairs()) {
    for (int v = 0; v < m.ground_size(); ++v) {
      const bool recolor = v == out.element;
      if (!recolor) {
        if (support.contains(v)) continue;  // would break colorfulness
        if (!m.is_independent(support.without(out.element).with(v))) continue;
      }
      for (int j = 1; j <= ell; ++j) {
        if (recolor && j == out.color) continue;  // identity
        swaps.push_back({out, {v, j}});
      }
    }
  }
  return swaps;
}

struct BestSwap {
  std::ptrdiff_t index = -1;
  double delta = -std::numeric_limits<double>::infinity();
};

// Deltas are pure functions of (S, candidate), so chunked evaluation plus an
// in-order reduction yields the same argmax as a sequential scan: strictly
// larger delta wins, equal delta keeps the smaller candidate index.
inline BestSwap scan_swaps(const std::vector<SwapCandidate>& swaps, const LiftedSolution& s,
                           const Decomposition& d, const PotentialParams& params, int threads) {
  std::vector<BestSwap> per_chunk(chunk_count(swaps.size(), threads));
  for_each_chunk(swaps.size(), threads, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    BestSwap local;
    for (std::size_t i = begin; i < end; ++i) {
      const double delta = swap_delta(s, swaps[i].out, swaps[i].in, d, params);
      if (delta > local.delta) {
        local.delta = delta;
        local.index = static_cast<std::ptrdiff_t>(i);
      }
    }
    per_chunk[chunk] = local;
  });
  BestSwap best;
  for (const BestSwap& b : per_chunk) {
    if (b.index >= 0 && b.delta > best.delta) best = b;
  }
  return best;
}

}  // namespace detail

// Non-oblivious local search guided by Phi_f. Starts from the greedy base
// lifted into color 1, then applies best-improvement swaps while one improves
// Phi_f by more than theta = epsilon * f(greedy) / (4 * rank).
inline RunReport local_search(const Decomposition& d, const Matroid& m,
                              const PotentialParams& params, const SearchConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const SetFunction& f = *d.f;
  const std::uint64_t calls_before = f.eval_count();
  const int rank = m.rank();

  RunReport report;
  report.lifted = LiftedSolution(params.ell);
  report.ell = params.ell;
  report.gamma = params.gamma;
  report.epsilon = cfg.epsilon;

  if (rank == 0) {
    report.oracle_calls = f.eval_count() - calls_before;
    report.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return report;
  }

  const ElementSet greedy_set = greedy(f, m);
  const double lower_bound = f.eval(greedy_set);
  const double theta = cfg.epsilon * lower_bound / (4.0 * rank);
  report.theta = theta;

  LiftedSolution s(params.ell);
  for (int e : greedy_set.members()) s.add({e, 1});
  // Complete to a lifted base if the initializer ever returns a non-base.
  while (s.size() < rank) {
    bool extended = false;
    for (int e = 0; e < m.ground_size() && !extended; ++e) {
      if (!s.support().contains(e) && m.is_independent(s.support().with(e))) {
        s.add({e, 1});
        extended = true;
      }
    }
    if (!extended) break;
  }

  double phi = phi_f(s, d, params).phi_f();
  report.converged = false;
  while (report.iterations < cfg.max_iterations) {
    const auto swaps = detail::feasible_swaps(s, m, params.ell);
    const auto best = detail::scan_swaps(swaps, s, d, params, cfg.threads);
    if (best.index < 0 || best.delta <= theta) {
      report.converged = true;
      break;
    }
    const auto& chosen = swaps[static_cast<std::size_t>(best.index)];
    s.remove(chosen.out);
    s.add(chosen.in);
    phi = phi_f(s, d, params).phi_f();
    ++report.iterations;
    if (cfg.record_trace) {
      report.trace.push_back({chosen.out, chosen.in, best.delta, phi});
    }
  }

  report.lifted = s;
  report.solution = s.support();
  report.f_value = f.eval(report.solution);
  report.phi_value = phi;
  report.oracle_calls = f.eval_count() - calls_before;
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

// Certified value/OPT bound for a run at explicit (ell, gamma): the curvature
// interpolation 1 - kappa * (1 + gamma^3/ell)^(-ell) minus the theta slack
// epsilon/4. The default pipeline reports the headline 1 - kappa/e - epsilon.
inline double explicit_guarantee(double kappa, int ell, double gamma, double epsilon) {
  const double residual = std::pow(1.0 + gamma * gamma * gamma / ell, -ell);
  return 1.0 - kappa * residual - epsilon / 4.0;
}

// End-to-end curvature-aware solve: kappa from the oracle, f = g + l split,
// gamma = 1 (g is submodular here), ell from smallest_ell, then local search.
inline RunReport solve_with_curvature(std::shared_ptr<const SetFunction> f, const Matroid& m,
                                      double epsilon, const SearchConfig& overrides = {}) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw InputError("solve_with_curvature: epsilon must lie in (0,1)");
  }
  const std::uint64_t calls_before = f->eval_count();
  const double kappa = curvature(*f);
  Decomposition d = decompose(f, kappa);

  SearchConfig cfg = overrides;
  cfg.epsilon = epsilon;
  const int cap = cfg.ell_cap > 0 ? cfg.ell_cap : default_ell_cap();
  const double gamma = cfg.gamma;
  const int ell = cfg.ell > 0 ? cfg.ell : smallest_ell(epsilon, gamma, cap);
  const PotentialParams params = PotentialParams::make(ell, gamma, cap);

  RunReport report = local_search(d, m, params, cfg);
  report.kappa = kappa;
  if (cfg.ell > 0 || gamma != 1.0) {
    report.guarantee = explicit_guarantee(kappa, ell, gamma, epsilon);
  } else {
    report.guarantee = 1.0 - kappa / std::exp(1.0) - epsilon;
  }
  report.oracle_calls = f->eval_count() - calls_before;
  return report;
}

// Geometric guess grid {1, 1-eta, (1-eta)^2, ...} truncated below gamma_min.
inline std::vector<double> gamma_grid(double gamma_min, double eta) {
  if (!(gamma_min > 0.0 && gamma_min <= 1.0)) {
    throw InputError("gamma_grid: gamma_min must lie in (0,1]");
  }
  if (!(eta > 0.0 && eta < 1.0)) throw InputError("gamma_grid: eta must lie in (0,1)");
  std::vector<double> grid;
  for (double gamma = 1.0; gamma >= gamma_min; gamma *= (1.0 - eta)) grid.push_back(gamma);
  return grid;
}

// Geometric guessing of the submodularity ratio of g = f - l: run the search
// at every grid gamma and keep the best f-value, ties to the larger gamma.
inline RunReport gamma_guessing_solve(std::shared_ptr<const SetFunction> f,
                                      std::vector<double> l_weights, const Matroid& m,
                                      double epsilon, double gamma_min, double eta,
                                      const SearchConfig& overrides = {}) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw InputError("gamma_guessing_solve: epsilon must lie in (0,1)");
  }
  const std::uint64_t calls_before = f->eval_count();
  Decomposition d = decomposition_from_weights(f, std::move(l_weights));

  SearchConfig cfg = overrides;
  cfg.epsilon = epsilon;
  const int cap = cfg.ell_cap > 0 ? cfg.ell_cap : default_ell_cap();

  std::optional<RunReport> best;
  for (double gamma : gamma_grid(gamma_min, eta)) {
    const int ell = cfg.ell > 0 ? cfg.ell : smallest_ell(epsilon, gamma, cap);
    const PotentialParams params = PotentialParams::make(ell, gamma, cap);
    SearchConfig run_cfg = cfg;
    run_cfg.gamma = gamma;
    RunReport report = local_search(d, m, params, run_cfg);
    report.guarantee = guarantee_factor(ell, gamma) - epsilon / 4.0;
    if (!best || report.f_value > best->f_value) best = std::move(report);
  }
  best->oracle_calls = f->eval_count() - calls_before;
  return *best;
}

// Plain local search on bases guided by f itself; the comparison baseline.
// Starts from the lexicographically first base and accepts the best single
// swap improving f by more than 1e-9 * scale.
inline ElementSet oblivious_local_search(const SetFunction& f, const Matroid& m,
                                         std::int64_t* iterations_out = nullptr) {
  ElementSet s = first_base(m);
  const double tol = kRatioTol * std::max(1.0, f.scale());
  std::int64_t iterations = 0;
  while (true) {
    const double current = f.eval(s);
    int best_out = -1;
    int best_in = -1;
    double best_value = current;
    for (int u : s.members()) {
      const ElementSet removed = s.without(u);
      for (int v = 0; v < m.ground_size(); ++v) {
        if (s.contains(v) || !m.is_independent(removed.with(v))) continue;
        const double value = f.eval(removed.with(v));
        if (value > best_value + tol) {
          best_value = value;
          best_out = u;
          best_in = v;
        }
      }
    }
    if (best_out < 0) break;
    s = s.without(best_out).with(best_in);
    ++iterations;
  }
  if (iterations_out != nullptr) *iterations_out = iterations;
  return s;
}

}  // namespace curvmax
