#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "curvmax/errors.hpp"

namespace curvmax {

inline constexpr int kMaxGroundSize = 64;

// Subset of a ground set {0..n-1}, packed into one 64-bit word.
// Bit i set <=> element i present. Value type, all ops exact.
class ElementSet {
 public:
  constexpr ElementSet() = default;
  constexpr explicit ElementSet(std::uint64_t bits) : bits_(bits) {}

  static constexpr ElementSet full(int n) {
    return ElementSet(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }
  static ElementSet of(std::initializer_list<int> elems) {
    ElementSet s;
    for (int e : elems) s = s.with(e);
    return s;
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool contains(int e) const { return (bits_ >> e) & 1u; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }

  constexpr ElementSet with(int e) const { return ElementSet(bits_ | (std::uint64_t{1} << e)); }
  constexpr ElementSet without(int e) const { return ElementSet(bits_ & ~(std::uint64_t{1} << e)); }

  constexpr bool subset_of(ElementSet other) const { return (bits_ & ~other.bits_) == 0; }

  friend constexpr ElementSet operator|(ElementSet a, ElementSet b) { return ElementSet(a.bits_ | b.bits_); }
  friend constexpr ElementSet operator&(ElementSet a, ElementSet b) { return ElementSet(a.bits_ & b.bits_); }
  friend constexpr ElementSet operator-(ElementSet a, ElementSet b) { return ElementSet(a.bits_ & ~b.bits_); }
  friend constexpr ElementSet operator^(ElementSet a, ElementSet b) { return ElementSet(a.bits_ ^ b.bits_); }

  constexpr auto operator<=>(const ElementSet&) const = default;

  // Members in increasing id order.
  std::vector<int> to_vector() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }

  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) {
      if (!first) s += ",";
      s += std::to_string(std::countr_zero(b));
      first = false;
    }
    return s + "}";
  }

  // Range over set bits, cheapest form: for (int e : set.members()) ...
  class MemberRange {
   public:
    class iterator {
     public:
      explicit constexpr iterator(std::uint64_t b) : bits_(b) {}
      constexpr int operator*() const { return std::countr_zero(bits_); }
      constexpr iterator& operator++() {
        bits_ &= bits_ - 1;
        return *this;
      }
      constexpr bool operator!=(const iterator& o) const { return bits_ != o.bits_; }

     private:
      std::uint64_t bits_;
    };
    explicit constexpr MemberRange(std::uint64_t b) : bits_(b) {}
    constexpr iterator begin() const { return iterator(bits_); }
    constexpr iterator end() const { return iterator(0); }

   private:
    std::uint64_t bits_;
  };
  constexpr MemberRange members() const { return MemberRange(bits_); }

 private:
  std::uint64_t bits_ = 0;
};

inline void require_in_ground(int e, int n, const char* where) {
  if (e < 0 || e >= n) {
    throw InputError(std::string(where) + ": element id " + std::to_string(e) +
                     " out of range [0," + std::to_string(n) + ")");
  }
}

inline void require_within_ground(ElementSet s, int n, const char* where) {
  if (!s.subset_of(ElementSet::full(n))) {
    throw InputError(std::string(where) + ": set " + s.to_string() +
                     " has members outside ground set of size " + std::to_string(n));
  }
}

}  // namespace curvmax
