#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "curvmax/element_set.hpp"
#include "curvmax/errors.hpp"
#include "curvmax/matroid.hpp"

namespace curvmax {

// One copy of a ground element in the lifted ground set E x [ell].
// Colors are 1-based.
struct LiftedElement {
  int element = 0;
  int color = 1;
  auto operator<=>(const LiftedElement&) const = default;
  std::string to_string() const {
    return "(" + std::to_string(element) + "," + std::to_string(color) + ")";
  }
};

// Bitmask over colors 1..ell (color c <-> bit c-1).
using ColorMask = std::uint32_t;

inline ColorMask color_bit(int color) { return ColorMask{1} << (color - 1); }
inline ColorMask all_colors(int ell) { return (ColorMask{1} << ell) - 1; }

// pi_J over an arbitrary (possibly non-colorful) subset of E x [ell], stored
// as one element mask per color.
inline ElementSet project(std::span<const ElementSet> by_color, ColorMask j_mask) {
  ElementSet out;
  for (ColorMask m = j_mask; m != 0; m &= m - 1) {
    out = out | by_color[static_cast<std::size_t>(std::countr_zero(m))];
  }
  return out;
}

// Colorful subset of E x [ell]: each element carries at most one color.
// Projection masks per color are kept in sync with the color map.
class LiftedSolution {
 public:
  explicit LiftedSolution(int ell) : ell_(ell), by_color_(static_cast<std::size_t>(ell)) {
    if (ell < 1) throw InputError("LiftedSolution: need at least one color");
    color_of_.fill(0);
  }

  int ell() const { return ell_; }
  int size() const { return support_.size(); }
  bool empty() const { return support_.empty(); }

  bool contains(LiftedElement p) const {
    return support_.contains(p.element) && color_of_[static_cast<std::size_t>(p.element)] == p.color;
  }
  // 0 when the element is absent.
  int color_of(int element) const { return color_of_[static_cast<std::size_t>(element)]; }

  void add(LiftedElement p) {
    check_color(p.color);
    if (p.element < 0 || p.element >= kMaxGroundSize) {
      throw InputError("LiftedSolution::add: element id out of range");
    }
    if (support_.contains(p.element)) {
      throw InputError("LiftedSolution::add: element " + std::to_string(p.element) +
                       " already present (colorfulness)");
    }
    support_ = support_.with(p.element);
    color_of_[static_cast<std::size_t>(p.element)] = static_cast<std::int8_t>(p.color);
    by_color_[static_cast<std::size_t>(p.color - 1)] =
        by_color_[static_cast<std::size_t>(p.color - 1)].with(p.element);
  }

  void remove(LiftedElement p) {
    if (!contains(p)) {
      throw InputError("LiftedSolution::remove: " + p.to_string() + " not present");
    }
    support_ = support_.without(p.element);
    color_of_[static_cast<std::size_t>(p.element)] = 0;
    by_color_[static_cast<std::size_t>(p.color - 1)] =
        by_color_[static_cast<std::size_t>(p.color - 1)].without(p.element);
  }

  // pi_[ell]
  ElementSet support() const { return support_; }
  // pi_J
  ElementSet project(ColorMask j_mask) const { return curvmax::project(by_color_, j_mask); }

  std::span<const ElementSet> by_color() const { return by_color_; }

  // Pairs sorted by (element, color); elements are unique, so by element.
  std::vector<LiftedElement> pairs() const {
    std::vector<LiftedElement> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (int e : support_.members()) out.push_back({e, color_of(e)});
    return out;
  }

  friend bool operator==(const LiftedSolution& a, const LiftedSolution& b) {
    return a.ell_ == b.ell_ && a.by_color_ == b.by_color_;
  }

 private:
  void check_color(int color) const {
    if (color < 1 || color > ell_) {
      throw InputError("color " + std::to_string(color) + " outside [1," + std::to_string(ell_) + "]");
    }
  }

  int ell_;
  std::vector<ElementSet> by_color_;
  ElementSet support_;
  std::array<std::int8_t, kMaxGroundSize> color_of_{};
};

// Independence in the lifted matroid I': colorful and the projection
// independent in the base matroid.
inline bool lifted_is_independent(const Matroid& m, int ell,
                                  std::span<const LiftedElement> pairs) {
  ElementSet seen;
  for (const LiftedElement& p : pairs) {
    if (p.color < 1 || p.color > ell) {
      throw InputError("lifted_is_independent: color " + std::to_string(p.color) +
                       " outside [1," + std::to_string(ell) + "]");
    }
    require_in_ground(p.element, m.ground_size(), "lifted_is_independent");
    if (seen.contains(p.element)) return false;  // element twice -> not colorful
    seen = seen.with(p.element);
  }
  return m.is_independent(seen);
}

// h_j((u,k)) = (h(u), j): the lift of a basis-exchange bijection into color j.
// Every S - (u,k) + h_j((u,k)) stays in I' because h is the identity on the
// intersection and maps the rest outside pi(S).
struct LiftedBijection {
  const ExchangeBijection* h;
  int color;
  LiftedElement operator()(LiftedElement p) const { return {(*h)(p.element), color}; }
};

inline LiftedBijection lift_bijection(const ExchangeBijection& h, int color) {
  if (color < 1) throw InputError("lift_bijection: color must be >= 1");
  return LiftedBijection{&h, color};
}

}  // namespace curvmax
