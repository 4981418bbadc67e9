#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "curvmax/element_set.hpp"
#include "curvmax/errors.hpp"

namespace curvmax {

// Matroid independence oracle over ground set {0..n-1}.
// Immutable after construction; all queries are safe for concurrent use.
class Matroid {
 public:
  enum class Kind { uniform, partition, graphic, explicit_bases };

  static Matroid uniform(int n, int rank) {
    check_ground(n);
    if (rank < 0 || rank > n) {
      throw InputError("uniform matroid: rank " + std::to_string(rank) +
                       " outside [0," + std::to_string(n) + "]");
    }
    Matroid m(Kind::uniform, n);
    m.uniform_rank_ = rank;
    return m;
  }

  // blocks must partition {0..n-1}; at most capacities[i] elements of block i
  // may appear in an independent set.
  static Matroid partition(int n, const std::vector<std::vector<int>>& blocks,
                           std::vector<int> capacities) {
    check_ground(n);
    if (blocks.size() != capacities.size()) {
      throw InputError("partition matroid: " + std::to_string(blocks.size()) + " blocks but " +
                       std::to_string(capacities.size()) + " capacities");
    }
    Matroid m(Kind::partition, n);
    m.block_of_.assign(static_cast<std::size_t>(n), -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (capacities[b] < 0) throw InputError("partition matroid: negative capacity");
      for (int e : blocks[b]) {
        require_in_ground(e, n, "partition matroid block");
        if (m.block_of_[static_cast<std::size_t>(e)] != -1) {
          throw InputError("partition matroid: element " + std::to_string(e) +
                           " appears in two blocks");
        }
        m.block_of_[static_cast<std::size_t>(e)] = static_cast<int>(b);
      }
    }
    for (int e = 0; e < n; ++e) {
      if (m.block_of_[static_cast<std::size_t>(e)] == -1) {
        throw InputError("partition matroid: element " + std::to_string(e) + " not in any block");
      }
    }
    m.capacities_ = std::move(capacities);
    return m;
  }

  // Elements are edges of a multigraph; a set is independent iff it is a forest.
  static Matroid graphic(int vertices, std::vector<std::pair<int, int>> edges) {
    check_ground(edges.size());
    if (vertices < 1) throw InputError("graphic matroid: need at least one vertex");
    for (const auto& [u, v] : edges) {
      if (u < 0 || u >= vertices || v < 0 || v >= vertices) {
        throw InputError("graphic matroid: edge endpoint outside vertex range");
      }
    }
    Matroid m(Kind::graphic, static_cast<int>(edges.size()));
    m.vertices_ = vertices;
    m.edges_ = std::move(edges);
    return m;
  }

  // Independence = subset of some listed base. No axiom validation on purpose:
  // this kind exists to let tests feed broken set systems into the machinery.
  static Matroid explicit_bases(int n, std::vector<ElementSet> bases) {
    check_ground(n);
    if (bases.empty()) throw InputError("explicit_bases matroid: empty base list");
    for (ElementSet b : bases) require_within_ground(b, n, "explicit_bases");
    Matroid m(Kind::explicit_bases, n);
    m.bases_ = std::move(bases);
    return m;
  }

  Kind kind() const { return kind_; }
  int ground_size() const { return n_; }

  bool is_independent(ElementSet s) const {
    require_within_ground(s, n_, "is_independent");
    switch (kind_) {
      case Kind::uniform:
        return s.size() <= uniform_rank_;
      case Kind::partition: {
        std::vector<int> used(capacities_.size(), 0);
        for (int e : s.members()) {
          const int b = block_of_[static_cast<std::size_t>(e)];
          if (++used[static_cast<std::size_t>(b)] > capacities_[static_cast<std::size_t>(b)]) {
            return false;
          }
        }
        return true;
      }
      case Kind::graphic:
        return is_forest(s);
      case Kind::explicit_bases:
        for (ElementSet b : bases_) {
          if (s.subset_of(b)) return true;
        }
        return false;
    }
    return false;  // unreachable
  }

  // Size of a maximal independent set, by greedy augmentation in id order.
  int rank() const {
    ElementSet s;
    for (int e = 0; e < n_; ++e) {
      if (is_independent(s.with(e))) s = s.with(e);
    }
    return s.size();
  }

  bool is_base(ElementSet s) const { return is_independent(s) && s.size() == rank(); }

 private:
  Matroid(Kind kind, int n) : kind_(kind), n_(n) {}

  static void check_ground(std::size_t n) {
    if (n < 1) throw InputError("matroid: empty ground set");
    if (n > kMaxGroundSize) throw InputError("matroid: ground set larger than 64");
  }

  bool is_forest(ElementSet s) const {
    std::vector<int> parent(static_cast<std::size_t>(vertices_));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&parent](int x) {
      while (parent[static_cast<std::size_t>(x)] != x) {
        parent[static_cast<std::size_t>(x)] =
            parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        x = parent[static_cast<std::size_t>(x)];
      }
      return x;
    };
    for (int e : s.members()) {
      const auto& [u, v] = edges_[static_cast<std::size_t>(e)];
      const int ru = find(u);
      const int rv = find(v);
      if (ru == rv) return false;  // closes a cycle (covers self-loops)
      parent[static_cast<std::size_t>(ru)] = rv;
    }
    return true;
  }

  Kind kind_;
  int n_;
  int uniform_rank_ = 0;                  // uniform
  std::vector<int> block_of_;             // partition
  std::vector<int> capacities_;           // partition
  int vertices_ = 0;                      // graphic
  std::vector<std::pair<int, int>> edges_;  // graphic
  std::vector<ElementSet> bases_;         // explicit-bases
};

// Bijection between two bases A and B with h(u) = u on the intersection and
// A - u + h(u) independent for every u in A.
class ExchangeBijection {
 public:
  ExchangeBijection(ElementSet domain, std::vector<int> image_by_id)
      : domain_(domain), image_(std::move(image_by_id)) {}

  ElementSet domain() const { return domain_; }
  int operator()(int u) const {
    if (!domain_.contains(u)) {
      throw InputError("exchange bijection: " + std::to_string(u) + " not in domain");
    }
    return image_[static_cast<std::size_t>(u)];
  }

 private:
  ElementSet domain_;
  std::vector<int> image_;  // indexed by element id, -1 outside domain
};

namespace detail {

// Kuhn augmenting-path matching. adj[i] lists right-node indices available to
// left node i; banned_right marks right nodes excluded from this round.
inline bool try_kuhn(int left, const std::vector<std::vector<int>>& adj,
                     std::vector<int>& match_right, std::vector<char>& visited) {
  for (int r : adj[static_cast<std::size_t>(left)]) {
    if (visited[static_cast<std::size_t>(r)]) continue;
    visited[static_cast<std::size_t>(r)] = 1;
    if (match_right[static_cast<std::size_t>(r)] == -1 ||
        try_kuhn(match_right[static_cast<std::size_t>(r)], adj, match_right, visited)) {
      match_right[static_cast<std::size_t>(r)] = left;
      return true;
    }
  }
  return false;
}

inline bool has_perfect_matching(const std::vector<std::vector<int>>& adj, int right_count) {
  std::vector<int> match_right(static_cast<std::size_t>(right_count), -1);
  for (std::size_t l = 0; l < adj.size(); ++l) {
    std::vector<char> visited(static_cast<std::size_t>(right_count), 0);
    if (!try_kuhn(static_cast<int>(l), adj, match_right, visited)) return false;
  }
  return true;
}

}  // namespace detail

// Basis-exchange bijection h : A -> B. Identity on A & B; on A \ B it is the
// lexicographically smallest perfect matching of the bipartite exchange graph
// (edge u--v iff A - u + v independent), which matroid theory guarantees to
// exist. A broken oracle that lacks the matching raises InternalError.
inline ExchangeBijection exchange_bijection(const Matroid& m, ElementSet a, ElementSet b) {
  const int rank = m.rank();
  if (!m.is_independent(a) || a.size() != rank) {
    throw InputError("exchange_bijection: " + a.to_string() + " is not a base");
  }
  if (!m.is_independent(b) || b.size() != rank) {
    throw InputError("exchange_bijection: " + b.to_string() + " is not a base");
  }

  std::vector<int> image(static_cast<std::size_t>(m.ground_size()), -1);
  for (int u : (a & b).members()) image[static_cast<std::size_t>(u)] = u;

  const std::vector<int> left = (a - b).to_vector();
  const std::vector<int> right = (b - a).to_vector();

  // Exchange graph between A \ B and B \ A, right side indexed into `right`.
  std::vector<std::vector<int>> adj(left.size());
  for (std::size_t i = 0; i < left.size(); ++i) {
    for (std::size_t j = 0; j < right.size(); ++j) {
      if (m.is_independent(a.without(left[i]).with(right[j]))) {
        adj[i].push_back(static_cast<int>(j));
      }
    }
  }

  // Fix left nodes in increasing element order; give each the smallest right
  // partner that keeps the remainder perfectly matchable.
  std::vector<char> right_used(right.size(), 0);
  for (std::size_t i = 0; i < left.size(); ++i) {
    bool assigned = false;
    for (int j : adj[i]) {
      if (right_used[static_cast<std::size_t>(j)]) continue;
      std::vector<std::vector<int>> rest;
      rest.reserve(left.size() - i - 1);
      for (std::size_t k = i + 1; k < left.size(); ++k) {
        std::vector<int> row;
        for (int r : adj[k]) {
          if (!right_used[static_cast<std::size_t>(r)] && r != j) row.push_back(r);
        }
        rest.push_back(std::move(row));
      }
      if (detail::has_perfect_matching(rest, static_cast<int>(right.size()))) {
        right_used[static_cast<std::size_t>(j)] = 1;
        image[static_cast<std::size_t>(left[i])] = right[static_cast<std::size_t>(j)];
        assigned = true;
        break;
      }
    }
    if (!assigned) {
      throw InternalError(
          "exchange_bijection: no perfect matching between " + a.to_string() + " and " +
          b.to_string() + "; the independence oracle violates the basis-exchange property");
    }
  }
  return ExchangeBijection(a, std::move(image));
}

}  // namespace curvmax
