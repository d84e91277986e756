#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <vector>

#include "rlvr/graph.hpp"

namespace rlvr::graph::detail {

using Mask = std::uint32_t;

inline Mask bit(int v) noexcept { return Mask{1} << v; }
inline int popcount(Mask m) noexcept { return std::popcount(m); }
inline int lowest(Mask m) noexcept { return std::countr_zero(m); }
inline Mask full_mask(int n) noexcept { return n >= 32 ? ~Mask{0} : (bit(n) - 1); }

/// Bitset adjacency plus a dense weight matrix (0 = no edge).
struct Adjacency {
  int n = 0;
  bool directed = false;
  std::array<Mask, kMaxNodes> out{};
  std::array<Mask, kMaxNodes> in{};
  std::array<Mask, kMaxNodes> both{};  // out | in
  std::array<std::array<int, kMaxNodes>, kMaxNodes> weight{};

  explicit Adjacency(const GraphProblem& problem);

  bool has_edge(int u, int v) const noexcept { return (out[u] & bit(v)) != 0; }
  /// Sum of edge weights with both endpoints in `set`.
  std::int64_t induced_weight(Mask set) const noexcept;
  /// Weakly connected and non-empty.
  bool connected_within(Mask set) const noexcept;
  /// Vertices reachable from `start` inside `set` ignoring direction.
  Mask flood(int start, Mask set) const noexcept;
};

/// True when the subgraph induced by `kept` has no cycle (directed cycle when
/// directed).
bool induced_acyclic(const Adjacency& adj, Mask kept) noexcept;

/// True when adding `v` to the acyclic induced subgraph `kept` keeps it acyclic.
bool stays_acyclic(const Adjacency& adj, Mask kept, int v) noexcept;

/// True when the subgraph induced by `set` is bipartite (direction ignored).
bool induced_bipartite(const Adjacency& adj, Mask set) noexcept;

/// Lexicographic comparison of the sorted vertex lists of two masks.
bool lex_less(Mask a, Mask b) noexcept;

std::vector<int> to_list(Mask m);

/// Largest clique inside `allowed` in the graph given by `nbr`; lexicographically
/// smallest among maximum cliques.
Mask max_clique(const std::array<Mask, kMaxNodes>& nbr, Mask allowed, Deadline& deadline);

/// All-pairs shortest path lengths (weights or unit), kUnreachable when none.
inline constexpr std::int64_t kUnreachable = INT64_MAX / 4;
std::vector<std::vector<std::int64_t>> all_pairs_shortest(const Adjacency& adj);

}  // namespace rlvr::graph::detail

namespace rlvr::graph {

/// |E| over the number of possible edges.
Rational density_of(const GraphProblem& problem);

}  // namespace rlvr::graph
