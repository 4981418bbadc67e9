#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "curvmax/element_set.hpp"
#include "curvmax/errors.hpp"

namespace curvmax {

// Relative tolerance for ratio-style comparisons, applied against the
// function's scale (max singleton value).
inline constexpr double kRatioTol = 1e-9;

// Monotone set-function value oracle f : 2^E -> R+, normalized so f(empty) = 0.
// Evaluations are memoized; the eval counter counts distinct evaluated subsets,
// so memoized lookups do not increment it and the count stays deterministic
// even when workers race on the same subset.
class SetFunction {
 public:
  enum class Kind { modular, coverage, facility_location, table };

  static SetFunction modular(std::vector<double> weights) {
    check_ground_size(weights.size(), "modular");
    check_nonnegative(weights, "modular weights");
    SetFunction f(Kind::modular, static_cast<int>(weights.size()));
    f.weights_ = std::move(weights);
    f.init_singletons();
    return f;
  }

  // item_weights: weight per universe item; covers[e]: items covered by element e.
  static SetFunction coverage(std::vector<double> item_weights,
                              std::vector<std::vector<int>> covers) {
    check_ground_size(covers.size(), "coverage");
    check_nonnegative(item_weights, "coverage universe weights");
    const int m = static_cast<int>(item_weights.size());
    if (m > kMaxGroundSize) throw InputError("coverage: universe larger than 64 items");
    SetFunction f(Kind::coverage, static_cast<int>(covers.size()));
    f.item_weights_ = std::move(item_weights);
    f.cover_masks_.resize(covers.size());
    for (std::size_t e = 0; e < covers.size(); ++e) {
      ElementSet items;
      for (int item : covers[e]) {
        if (item < 0 || item >= m) {
          throw InputError("coverage: element " + std::to_string(e) + " references item " +
                           std::to_string(item) + " outside universe of size " + std::to_string(m));
        }
        if (items.contains(item)) {
          throw InputError("coverage: element " + std::to_string(e) + " lists item " +
                           std::to_string(item) + " twice");
        }
        items = items.with(item);
      }
      f.cover_masks_[e] = items;
    }
    f.init_singletons();
    return f;
  }

  // gains[client][e]: benefit of serving `client` from facility e.
  // f(S) = sum over clients of max_{e in S} gains[client][e].
  static SetFunction facility_location(std::vector<std::vector<double>> gains) {
    if (gains.empty()) throw InputError("facility_location: no clients");
    const std::size_t n = gains.front().size();
    check_ground_size(n, "facility_location");
    for (const auto& row : gains) {
      if (row.size() != n) throw InputError("facility_location: ragged gain matrix");
      check_nonnegative(row, "facility_location gains");
    }
    SetFunction f(Kind::facility_location, static_cast<int>(n));
    f.gains_ = std::move(gains);
    f.init_singletons();
    return f;
  }

  // Explicit value table over all 2^n subsets, indexed by bitmask.
  // Values are shifted so the empty set maps to 0; `shifted` reports whether a
  // shift happened so callers can surface a warning.
  static SetFunction table(int n, std::vector<double> values, bool* shifted = nullptr) {
    if (n < 1 || n > 20) throw InputError("table: ground size must be in [1,20]");
    if (values.size() != (std::size_t{1} << n)) {
      throw InputError("table: expected " + std::to_string(std::size_t{1} << n) +
                       " values, got " + std::to_string(values.size()));
    }
    const double offset = values[0];
    if (shifted != nullptr) *shifted = offset != 0.0;
    double scale = 0.0;
    for (double& v : values) {
      if (!std::isfinite(v)) throw InputError("table: non-finite value");
      v -= offset;
      scale = std::max(scale, std::abs(v));
    }
    for (std::size_t mask = 0; mask < values.size(); ++mask) {
      if (values[mask] < -kRatioTol * std::max(1.0, scale)) {
        throw InputError("table: value for subset mask " + std::to_string(mask) +
                         " is negative after normalization");
      }
      values[mask] = std::max(values[mask], 0.0);
    }
    SetFunction f(Kind::table, n);
    f.table_ = std::move(values);
    f.init_singletons();
    return f;
  }

  Kind kind() const { return kind_; }
  int ground_size() const { return n_; }
  ElementSet ground() const { return ElementSet::full(n_); }

  double eval(ElementSet s) const {
    require_within_ground(s, n_, "eval");
    {
      std::lock_guard<std::mutex> lock(memo_->mutex);
      auto it = memo_->map.find(s.bits());
      if (it != memo_->map.end()) return it->second;
    }
    const double value = raw_eval(s);
    std::lock_guard<std::mutex> lock(memo_->mutex);
    auto [it, inserted] = memo_->map.try_emplace(s.bits(), value);
    if (inserted) ++memo_->count;
    return it->second;
  }

  // f(S + e) - f(S).  Requires e outside S.
  double marginal(int e, ElementSet s) const {
    require_in_ground(e, n_, "marginal");
    if (s.contains(e)) {
      throw InputError("marginal: element " + std::to_string(e) + " already in " + s.to_string());
    }
    return eval(s.with(e)) - eval(s);
  }

  std::uint64_t eval_count() const {
    std::lock_guard<std::mutex> lock(memo_->mutex);
    return memo_->count;
  }

  double singleton(int e) const {
    require_in_ground(e, n_, "singleton");
    return singletons_[static_cast<std::size_t>(e)];
  }

  // Max singleton value; the scale all relative tolerances refer to.
  double scale() const { return scale_; }

 private:
  SetFunction(Kind kind, int n) : kind_(kind), n_(n) {}

  static void check_ground_size(std::size_t n, const char* what) {
    if (n < 1) throw InputError(std::string(what) + ": empty ground set");
    if (n > kMaxGroundSize) throw InputError(std::string(what) + ": ground set larger than 64");
  }
  static void check_nonnegative(const std::vector<double>& v, const char* what) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!std::isfinite(v[i]) || v[i] < 0.0) {
        throw InputError(std::string(what) + "[" + std::to_string(i) + "] must be finite and >= 0");
      }
    }
  }

  void init_singletons() {
    singletons_.resize(static_cast<std::size_t>(n_));
    for (int e = 0; e < n_; ++e) {
      singletons_[static_cast<std::size_t>(e)] = raw_eval(ElementSet{}.with(e));
      scale_ = std::max(scale_, singletons_[static_cast<std::size_t>(e)]);
    }
  }

  double raw_eval(ElementSet s) const {
    switch (kind_) {
      case Kind::modular: {
        double total = 0.0;
        for (int e : s.members()) total += weights_[static_cast<std::size_t>(e)];
        return total;
      }
      case Kind::coverage: {
        ElementSet covered;
        for (int e : s.members()) covered = covered | cover_masks_[static_cast<std::size_t>(e)];
        double total = 0.0;
        for (int item : covered.members()) total += item_weights_[static_cast<std::size_t>(item)];
        return total;
      }
      case Kind::facility_location: {
        if (s.empty()) return 0.0;
        double total = 0.0;
        for (const auto& row : gains_) {
          double best = 0.0;
          for (int e : s.members()) best = std::max(best, row[static_cast<std::size_t>(e)]);
          total += best;
        }
        return total;
      }
      case Kind::table:
        return table_[s.bits()];
    }
    return 0.0;  // unreachable
  }

  Kind kind_;
  int n_;
  std::vector<double> weights_;             // modular
  std::vector<double> item_weights_;        // coverage
  std::vector<ElementSet> cover_masks_;     // coverage
  std::vector<std::vector<double>> gains_;  // facility location
  std::vector<double> table_;               // table

  std::vector<double> singletons_;
  double scale_ = 0.0;

  // Heap-held so the oracle stays movable; counts distinct evaluated subsets.
  struct Memo {
    std::mutex mutex;
    std::unordered_map<std::uint64_t, double> map;
    std::uint64_t count = 0;
  };
  std::unique_ptr<Memo> memo_ = std::make_unique<Memo>();
};

// Curvature of a monotone submodular function:
//   kappa = 1 - min_e marginal(e, E - e) / f({e})   over elements with f({e}) > 0.
// For monotone submodular f the minimum over all (S, e) pairs is attained at
// S = E - e, so the single sweep suffices.
inline double curvature(const SetFunction& f) {
  const int n = f.ground_size();
  const ElementSet ground = f.ground();
  const double zero_tol = kRatioTol * std::max(1.0, f.scale());
  double min_ratio = std::numeric_limits<double>::infinity();
  for (int e = 0; e < n; ++e) {
    const double fe = f.singleton(e);
    if (fe <= zero_tol) continue;  // zero-singleton elements never affect any solution
    min_ratio = std::min(min_ratio, f.marginal(e, ground.without(e)) / fe);
  }
  if (!std::isfinite(min_ratio)) {
    throw InputError("curvature: degenerate function, f({e}) = 0 for every element");
  }
  return std::clamp(1.0 - min_ratio, 0.0, 1.0);
}

// Submodularity ratio by full enumeration:
//   gamma = min over T subset of S, e outside S of marginal(e,T) / marginal(e,S).
// Pairs with marginal(e,S) = 0 are skipped (their ratio is +inf). The T = S
// term contributes ratio 1 whenever any pair survives, so the result never
// exceeds 1.
inline double submodularity_ratio_bruteforce(const SetFunction& f, int cap = 12) {
  const int n = f.ground_size();
  if (n > cap) {
    throw ResourceError("submodularity_ratio_bruteforce: n = " + std::to_string(n) +
                        " above enumeration cap " + std::to_string(cap));
  }
  const double zero_tol = kRatioTol * std::max(1.0, f.scale());
  double min_ratio = std::numeric_limits<double>::infinity();
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t s_bits = 0; s_bits < limit; ++s_bits) {
    const ElementSet s(s_bits);
    for (int e = 0; e < n; ++e) {
      if (s.contains(e)) continue;
      const double denom = f.marginal(e, s);
      if (denom <= zero_tol) continue;
      // Enumerate T over all subsets of S (including T = S).
      std::uint64_t t_bits = s_bits;
      while (true) {
        min_ratio = std::min(min_ratio, f.marginal(e, ElementSet(t_bits)) / denom);
        if (t_bits == 0) break;
        t_bits = (t_bits - 1) & s_bits;
      }
    }
  }
  if (!std::isfinite(min_ratio)) return 1.0;  // every pair skipped
  return std::clamp(min_ratio, 0.0, 1.0);
}

// f split into a submodular part g and an additive part l with g + l = f.
// From curvature kappa: l has weights (1 - kappa) * f({e}).
struct Decomposition {
  std::shared_ptr<const SetFunction> f;
  std::optional<double> kappa;  // present when derived from curvature
  std::vector<double> l_weights;

  double l_value(ElementSet s) const {
    double total = 0.0;
    for (int e : s.members()) total += l_weights[static_cast<std::size_t>(e)];
    return total;
  }
  double g_value(ElementSet s) const { return f->eval(s) - l_value(s); }
  double g_marginal(int e, ElementSet s) const {
    return f->marginal(e, s) - l_weights[static_cast<std::size_t>(e)];
  }
};

inline Decomposition decompose(std::shared_ptr<const SetFunction> f, double kappa) {
  if (!(kappa >= 0.0 && kappa <= 1.0)) {
    throw InputError("decompose: curvature " + std::to_string(kappa) + " outside [0,1]");
  }
  Decomposition d;
  d.kappa = kappa;
  std::vector<double> weights(static_cast<std::size_t>(f->ground_size()));
  for (int e = 0; e < f->ground_size(); ++e) {
    weights[static_cast<std::size_t>(e)] = (1.0 - kappa) * f->singleton(e);
  }
  d.l_weights = std::move(weights);
  d.f = std::move(f);
  return d;
}

// Decomposition with caller-supplied additive weights (gamma-guessing mode,
// where g = f - l need not be submodular).
inline Decomposition decomposition_from_weights(std::shared_ptr<const SetFunction> f,
                                                std::vector<double> l_weights) {
  if (l_weights.size() != static_cast<std::size_t>(f->ground_size())) {
    throw InputError("l_weights: expected " + std::to_string(f->ground_size()) +
                     " entries, got " + std::to_string(l_weights.size()));
  }
  for (std::size_t e = 0; e < l_weights.size(); ++e) {
    if (!std::isfinite(l_weights[e]) || l_weights[e] < 0.0) {
      throw InputError("l_weights[" + std::to_string(e) + "] must be finite and >= 0");
    }
  }
  Decomposition d;
  d.l_weights = std::move(l_weights);
  d.f = std::move(f);
  return d;
}

}  // namespace curvmax
