#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "curvmax/element_set.hpp"
#include "curvmax/errors.hpp"
#include "curvmax/lifted.hpp"
#include "curvmax/matroid.hpp"
#include "curvmax/potential.hpp"
#include "curvmax/search.hpp"
#include "curvmax/set_function.hpp"

namespace curvmax {

struct BruteForceResult {
  ElementSet opt_set;
  double opt_value = 0.0;
  std::uint64_t enumerated = 0;  // independent sets visited
};

namespace detail {

// DFS over independent sets in increasing-id order. Hereditary pruning: a set
// is extended only while independent, which visits every independent set once
// and in lexicographic order of the sorted id sequence, so keeping the first
// strict maximum also resolves value ties to the lexicographically smallest set.
template <class Value>
void enumerate_independent(const Matroid& m, ElementSet s, int next, Value&& visit) {
  visit(s);
  for (int e = next; e < m.ground_size(); ++e) {
    if (m.is_independent(s.with(e))) {
      enumerate_independent(m, s.with(e), e + 1, visit);
    }
  }
}

}  // namespace detail

// Exact maximum of `value` over independent sets (or only bases). The callable
// is invoked on every visited subset.
template <class Value>
BruteForceResult brute_force_opt_over(Value&& value, const Matroid& m, bool bases_only = false,
                                      int cap = 20) {
  if (m.ground_size() > cap) {
    throw ResourceError("brute_force_opt: n = " + std::to_string(m.ground_size()) +
                        " above enumeration cap " + std::to_string(cap));
  }
  const int rank = m.rank();
  BruteForceResult result;
  bool have = false;
  detail::enumerate_independent(m, ElementSet{}, 0, [&](ElementSet s) {
    ++result.enumerated;
    if (bases_only && s.size() != rank) return;
    const double v = value(s);
    if (!have || v > result.opt_value) {
      result.opt_set = s;
      result.opt_value = v;
      have = true;
    }
  });
  if (!have) throw InternalError("brute_force_opt: no feasible set visited");
  return result;
}

inline BruteForceResult brute_force_opt(const SetFunction& f, const Matroid& m, int cap = 20) {
  return brute_force_opt_over([&f](ElementSet s) { return f.eval(s); }, m, false, cap);
}

// ---------------------------------------------------------------------------
// Exhaustive property scans (shared by the verification suite and the tests).
// ---------------------------------------------------------------------------

// First (S,T) with f(S) + f(T) < f(S|T) + f(S&T) - tol, if any.
template <class F>
std::optional<std::pair<ElementSet, ElementSet>> submodularity_violation(F&& f, int n, double tol) {
  const std::uint64_t limit = std::uint64_t{1} << n;
  std::vector<double> values(limit);
  for (std::uint64_t s = 0; s < limit; ++s) values[s] = f(ElementSet(s));
  for (std::uint64_t s = 0; s < limit; ++s) {
    for (std::uint64_t t = s + 1; t < limit; ++t) {
      if (values[s] + values[t] < values[s | t] + values[s & t] - tol) {
        return std::make_pair(ElementSet(s), ElementSet(t));
      }
    }
  }
  return std::nullopt;
}

// First (S,e) with f(S+e) < f(S) - tol, if any.
template <class F>
std::optional<std::pair<ElementSet, int>> monotonicity_violation(F&& f, int n, double tol) {
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t s = 0; s < limit; ++s) {
    const ElementSet set(s);
    const double base = f(set);
    for (int e = 0; e < n; ++e) {
      if (set.contains(e)) continue;
      if (f(set.with(e)) < base - tol) return std::make_pair(set, e);
    }
  }
  return std::nullopt;
}

// Matroid axiom scans over an arbitrary independence predicate on bitmasks.
template <class Indep>
std::optional<ElementSet> hereditary_violation(Indep&& indep, int n) {
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t s = 0; s < limit; ++s) {
    const ElementSet set(s);
    if (!indep(set)) continue;
    for (int e : set.members()) {
      if (!indep(set.without(e))) return set;
    }
  }
  return std::nullopt;
}

template <class Indep>
std::optional<std::pair<ElementSet, ElementSet>> exchange_violation(Indep&& indep, int n) {
  const std::uint64_t limit = std::uint64_t{1} << n;
  std::vector<ElementSet> independent;
  for (std::uint64_t s = 0; s < limit; ++s) {
    if (indep(ElementSet(s))) independent.push_back(ElementSet(s));
  }
  for (ElementSet a : independent) {
    for (ElementSet b : independent) {
      if (a.size() >= b.size()) continue;
      bool extendable = false;
      for (int e : (b - a).members()) {
        if (indep(a.with(e))) {
          extendable = true;
          break;
        }
      }
      if (!extendable) return std::make_pair(a, b);
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Guarantee inequality checks.
// ---------------------------------------------------------------------------

struct ColorDetail {
  int color = 0;
  double bracket = 0.0;            // per-color mean swap loss of Phi
  double identity_residual = 0.0;  // additive-part identity, guarantee check only
};

struct InequalityCheckReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double bracket = 0.0;
  double slack_allow = 0.0;
  bool pass = false;
  std::optional<std::string> skipped;  // set when OPT is out of brute-force reach
  std::vector<ColorDetail> details;
};

namespace detail {

// (1/ell) * sum over colors j and pairs (u,k) in S of
//   Phi(S) - Phi(S - (u,k) + (h(u), j)),
// the mean swap-loss term of the exchange inequality. Per-color sums go into
// `details`.
template <class Phi>
double bracket_term(const LiftedSolution& s, const ExchangeBijection& h, int ell, Phi&& phi,
                    std::vector<ColorDetail>* details) {
  std::vector<ElementSet> masks(s.by_color().begin(), s.by_color().end());
  const double phi_s = phi(masks);
  double total = 0.0;
  for (int j = 1; j <= ell; ++j) {
    double color_sum = 0.0;
    for (const LiftedElement p : s.pairs()) {
      const int target = h(p.element);
      if (target == p.element && j == p.color) continue;  // identity swap
      masks[static_cast<std::size_t>(p.color - 1)] =
          masks[static_cast<std::size_t>(p.color - 1)].without(p.element);
      masks[static_cast<std::size_t>(j - 1)] = masks[static_cast<std::size_t>(j - 1)].with(target);
      color_sum += phi_s - phi(masks);
      masks.assign(s.by_color().begin(), s.by_color().end());
    }
    if (details != nullptr) details->push_back({j, color_sum, 0.0});
    total += color_sum;
  }
  return total / ell;
}

}  // namespace detail

// The potential exchange inequality at a colorful base S:
//   g(pi(S)) >= (1 - (1 + gamma^3/ell)^(-ell)) * g(OPT_g) + bracket,
// with OPT_g the best base for g and the bracket built from the exact
// basis-exchange bijection pi(S) -> OPT_g. Holds for every colorful base, so
// the allowed slack is zero (up to the floating-point tolerance).
template <class G>
InequalityCheckReport check_potential_inequality(const LiftedSolution& s, G&& g, const Matroid& m,
                              const PotentialParams& params, double scale) {
  const int rank = m.rank();
  if (s.size() != rank || !m.is_independent(s.support())) {
    throw InputError("check_potential_inequality: projection " + s.support().to_string() +
                     " is not a base (the bijection needs |S| = |OPT|)");
  }
  const BruteForceResult opt = brute_force_opt_over(g, m, /*bases_only=*/true);
  if (opt.opt_set.size() != s.size()) {
    throw InputError("check_potential_inequality: |OPT| != |pi(S)|");
  }
  const ExchangeBijection h = exchange_bijection(m, s.support(), opt.opt_set);

  InequalityCheckReport report;
  auto phi = [&g, &params](const std::vector<ElementSet>& masks) {
    return phi_g(std::span<const ElementSet>(masks), g, params);
  };
  report.bracket = detail::bracket_term(s, h, params.ell, phi, &report.details);
  report.lhs = g(s.support());
  report.rhs = guarantee_factor(params.ell, params.gamma) * opt.opt_value + report.bracket;
  report.slack_allow = 0.0;
  report.pass = report.lhs >= report.rhs - kRatioTol * std::max(1.0, scale);
  return report;
}

inline InequalityCheckReport check_potential_inequality(const LiftedSolution& s, const Decomposition& d,
                                     const Matroid& m, const PotentialParams& params) {
  return check_potential_inequality(
      s, [&d](ElementSet t) { return d.g_value(t); }, m, params, d.f->scale());
}

// The guarantee at an approximate local maximum of Phi_f:
//   g(pi(S)) + l(pi(S)) >= factor * g(OPT) + l(OPT) - r * theta,
// where OPT is the best base for f and each of the r summed swaps can fall
// short of a strict improvement by at most theta. Also replays the exact
// additive identity l(OPT) = l(pi(S)) - sum of per-swap linear losses for
// every color independently.
inline InequalityCheckReport check_local_max_guarantee(const RunReport& run, const Decomposition& d,
                                     const Matroid& m, const PotentialParams& params,
                                     double theta) {
  const LiftedSolution& s = run.lifted;
  const int rank = m.rank();
  if (s.size() != rank || !m.is_independent(s.support())) {
    throw InputError("check_local_max_guarantee: solution projection is not a base");
  }
  const SetFunction& f = *d.f;
  InequalityCheckReport report;
  BruteForceResult opt;
  try {
    opt = brute_force_opt_over([&f](ElementSet t) { return f.eval(t); }, m, /*bases_only=*/true);
  } catch (const ResourceError& e) {
    report.skipped = e.what();
    return report;
  }
  const ExchangeBijection h = exchange_bijection(m, s.support(), opt.opt_set);
  const double scale = std::max(1.0, f.scale());

  report.lhs = d.g_value(s.support()) + d.l_value(s.support());
  report.rhs = guarantee_factor(params.ell, params.gamma) * d.g_value(opt.opt_set) +
               d.l_value(opt.opt_set);
  report.slack_allow = rank * theta;

  bool identity_ok = true;
  const double l_s = d.l_value(s.support());
  const double l_opt = d.l_value(opt.opt_set);
  for (int j = 1; j <= params.ell; ++j) {
    double loss_sum = 0.0;  // sum of l(pi(S)) - l(pi(S - (u,k) + h_j((u,k))))
    for (const LiftedElement p : s.pairs()) {
      const ElementSet swapped = s.support().without(p.element).with(h(p.element));
      loss_sum += l_s - d.l_value(swapped);
    }
    const double residual = std::abs(l_s - loss_sum - l_opt);
    report.details.push_back({j, 0.0, residual});
    if (residual > kRatioTol * scale) identity_ok = false;
  }

  report.pass = identity_ok &&
                report.lhs >= report.rhs - report.slack_allow - kRatioTol * scale;
  return report;
}

// ---------------------------------------------------------------------------
// Decomposition and end-to-end ratio checks.
// ---------------------------------------------------------------------------

struct DecompositionCheckReport {
  bool identity_ok = true;
  bool monotone_ok = true;
  bool submodular_ok = true;
  bool bound_ok = true;
  std::vector<std::string> violations;
  bool pass() const { return identity_ok && monotone_ok && submodular_ok && bound_ok; }
};

// Exhaustively asserts g + l = f, g monotone, g submodular and g <= kappa * f
// over all subsets (n <= cap).
inline DecompositionCheckReport check_decomposition(const SetFunction& f, const Decomposition& d,
                                                    int cap = 10) {
  const int n = f.ground_size();
  if (n > cap) {
    throw ResourceError("check_decomposition: n = " + std::to_string(n) + " above cap " +
                        std::to_string(cap));
  }
  const double scale = std::max(1.0, f.scale());
  DecompositionCheckReport report;

  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t bits = 0; bits < limit; ++bits) {
    const ElementSet s(bits);
    const double err = std::abs(d.g_value(s) + d.l_value(s) - f.eval(s));
    if (err > 1e-12 * scale) {
      report.identity_ok = false;
      report.violations.push_back("g+l != f at " + s.to_string());
    }
    if (d.kappa && d.g_value(s) > *d.kappa * f.eval(s) + kRatioTol * scale) {
      report.bound_ok = false;
      report.violations.push_back("g > kappa*f at " + s.to_string());
    }
  }

  auto g = [&d](ElementSet s) { return d.g_value(s); };
  if (auto bad = monotonicity_violation(g, n, kRatioTol * scale)) {
    report.monotone_ok = false;
    report.violations.push_back("g not monotone at " + bad->first.to_string() + " + element " +
                                std::to_string(bad->second));
  }
  if (auto bad = submodularity_violation(g, n, kRatioTol * scale)) {
    report.submodular_ok = false;
    report.violations.push_back("g not submodular at S=" + bad->first.to_string() +
                                " T=" + bad->second.to_string());
  }
  return report;
}

struct RatioCheckReport {
  double f_value = 0.0;
  double opt_value = 0.0;
  double bound = 0.0;  // 1 - kappa/e - epsilon
  double ratio = 1.0;
  bool pass = false;
};

// End-to-end ratio check: solve, then compare against the brute-force optimum.
inline RatioCheckReport check_ratio(std::shared_ptr<const SetFunction> f, const Matroid& m,
                                    double epsilon, const SearchConfig& cfg = {}) {
  const SetFunction& fn = *f;
  RunReport run = solve_with_curvature(std::move(f), m, epsilon, cfg);
  const BruteForceResult opt = brute_force_opt(fn, m);
  RatioCheckReport report;
  report.f_value = run.f_value;
  report.opt_value = opt.opt_value;
  report.bound = run.guarantee;
  report.ratio = opt.opt_value > 0.0 ? run.f_value / opt.opt_value : 1.0;
  report.pass =
      run.f_value >= report.bound * opt.opt_value - kRatioTol * std::max(1.0, fn.scale());
  return report;
}

}  // namespace curvmax
