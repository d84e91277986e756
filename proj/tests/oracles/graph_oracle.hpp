#pragma once

// Exhaustive reference objectives for graph operators on small graphs:
// every vertex subset (n <= 12), every edge subset (m <= 16) and every
// simple path by depth-first enumeration.

#include "rlvr/graph.hpp"

namespace oracle {

inline constexpr int kMaxOracleNodes = 12;
inline constexpr int kMaxOracleEdges = 16;

/// Optimal objective as the library defines it (Hamiltonian operators: n
/// when a path/cycle exists, else 0). Throws std::invalid_argument outside
/// the oracle's size limits.
rlvr::Rational brute_force_objective(const rlvr::graph::GraphProblem& problem);

}  // namespace oracle

#include "rlvr/rng.hpp"

namespace oracle {

/// Random valid instance of `kind` with 5..max_nodes nodes. Edge-set
/// operators keep at most kMaxOracleEdges edges so they stay enumerable.
rlvr::graph::GraphProblem random_small_graph(rlvr::graph::OperatorKind kind, rlvr::Rng& rng, int max_nodes = 10);

}  // namespace oracle
