// Exact solvers for every graph operator.
//
// Vertex-set searches branch on vertices in increasing index order, trying
// "include" before "exclude", and only accept strictly better incumbents. With
// an admissible bound this returns the lexicographically smallest optimum.

#include <algorithm>
#include <climits>
#include <numeric>

#include "graph_internal.hpp"

namespace rlvr::graph {

namespace detail {

Adjacency::Adjacency(const GraphProblem& problem) : n(problem.n_nodes), directed(problem.directed) {
  for (const auto& e : problem.edges) {
    const int w = problem.weighted ? e.weight : 1;
    out[e.u] |= bit(e.v);
    in[e.v] |= bit(e.u);
    weight[e.u][e.v] = w;
    if (!directed) {
      out[e.v] |= bit(e.u);
      in[e.u] |= bit(e.v);
      weight[e.v][e.u] = w;
    }
  }
  for (int v = 0; v < n; ++v) both[v] = out[v] | in[v];
}

std::int64_t Adjacency::induced_weight(Mask set) const noexcept {
  std::int64_t total = 0;
  for (Mask s = set; s; s &= s - 1) {
    const int u = lowest(s);
    for (Mask t = out[u] & set; t; t &= t - 1) total += weight[u][lowest(t)];
  }
  return directed ? total : total / 2;
}

Mask Adjacency::flood(int start, Mask set) const noexcept {
  Mask seen = bit(start);
  Mask frontier = seen;
  while (frontier) {
    Mask next = 0;
    for (Mask f = frontier; f; f &= f - 1) next |= both[lowest(f)];
    next &= set & ~seen;
    seen |= next;
    frontier = next;
  }
  return seen;
}

bool Adjacency::connected_within(Mask set) const noexcept {
  if (set == 0) return false;
  return flood(lowest(set), set) == set;
}

bool stays_acyclic(const Adjacency& adj, Mask kept, int v) noexcept {
  if (adj.directed) {
    // A cycle through v needs v -> a ~> b -> v with a, b kept.
    Mask reach = adj.out[v] & kept;
    Mask frontier = reach;
    while (frontier) {
      Mask next = 0;
      for (Mask f = frontier; f; f &= f - 1) next |= adj.out[lowest(f)];
      next &= kept & ~reach;
      reach |= next;
      frontier = next;
    }
    return (reach & adj.in[v]) == 0;
  }
  const Mask neighbours = adj.both[v] & kept;
  for (Mask rest = neighbours; rest;) {
    const Mask component = adj.flood(lowest(rest), kept);
    if (popcount(component & neighbours) > 1) return false;
    rest &= ~component;
  }
  return true;
}

bool induced_acyclic(const Adjacency& adj, Mask kept) noexcept {
  Mask built = 0;
  for (Mask s = kept; s; s &= s - 1) {
    const int v = lowest(s);
    if (!stays_acyclic(adj, built, v)) return false;
    built |= bit(v);
  }
  return true;
}

bool induced_bipartite(const Adjacency& adj, Mask set) noexcept {
  Mask unvisited = set;
  while (unvisited) {
    const int root = lowest(unvisited);
    Mask side[2] = {bit(root), 0};
    Mask frontier = bit(root);
    int colour = 0;
    Mask seen = bit(root);
    while (frontier) {
      Mask next = 0;
      for (Mask f = frontier; f; f &= f - 1) next |= adj.both[lowest(f)];
      next &= set;
      if (next & side[colour]) return false;
      next &= ~seen;
      colour ^= 1;
      side[colour] |= next;
      seen |= next;
      frontier = next;
    }
    unvisited &= ~seen;
  }
  return true;
}

bool lex_less(Mask a, Mask b) noexcept {
  if (a == b) return false;
  const Mask diff = a ^ b;
  const int d = lowest(diff);
  const Mask above = ~full_mask(d + 1);
  if (a & bit(d)) return (b & above) != 0;  // a has d, b has something larger or ends
  return (a & above) == 0;                  // b has d; a < b iff a ended
}

std::vector<int> to_list(Mask m) {
  std::vector<int> out;
  for (; m; m &= m - 1) out.push_back(lowest(m));
  return out;
}

namespace {

int colour_bound(const std::array<Mask, kMaxNodes>& nbr, Mask candidates) noexcept {
  int colours = 0;
  Mask uncoloured = candidates;
  while (uncoloured) {
    ++colours;
    Mask available = uncoloured;
    while (available) {
      const int v = lowest(available);
      uncoloured &= ~bit(v);
      available &= ~nbr[v] & ~bit(v);
    }
  }
  return colours;
}

struct CliqueSearch {
  const std::array<Mask, kMaxNodes>& nbr;
  Deadline& deadline;
  Mask best = 0;
  int best_size = 0;

  void expand(Mask current, int size, Mask candidates) {
    deadline.check();
    if (candidates == 0) {
      if (size > best_size) {
        best = current;
        best_size = size;
      }
      return;
    }
    if (size + colour_bound(nbr, candidates) <= best_size) return;
    const int v = lowest(candidates);
    expand(current | bit(v), size + 1, candidates & nbr[v]);
    expand(current, size, candidates & ~bit(v));
  }
};

}  // namespace

Mask max_clique(const std::array<Mask, kMaxNodes>& nbr, Mask allowed, Deadline& deadline) {
  CliqueSearch search{nbr, deadline};
  search.expand(0, 0, allowed);
  return search.best;
}

std::vector<std::vector<std::int64_t>> all_pairs_shortest(const Adjacency& adj) {
  const int n = adj.n;
  std::vector<std::vector<std::int64_t>> dist(static_cast<std::size_t>(n),
                                              std::vector<std::int64_t>(static_cast<std::size_t>(n), kUnreachable));
  for (int u = 0; u < n; ++u) {
    dist[u][u] = 0;
    for (Mask t = adj.out[u]; t; t &= t - 1) {
      const int v = lowest(t);
      dist[u][v] = std::min<std::int64_t>(dist[u][v], adj.weight[u][v]);
    }
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (dist[i][k] + dist[k][j] < dist[i][j]) dist[i][j] = dist[i][k] + dist[k][j];
  return dist;
}

}  // namespace detail

using namespace detail;

namespace {

std::array<Mask, kMaxNodes> complement(const Adjacency& adj) {
  std::array<Mask, kMaxNodes> comp{};
  const Mask all = full_mask(adj.n);
  for (int v = 0; v < adj.n; ++v) comp[v] = all & ~adj.both[v] & ~bit(v);
  return comp;
}

GraphSolution vertex_set_solution(Mask m) {
  return GraphSolution{Rational(popcount(m)), VertexSet{to_list(m)}, true};
}

// --- independent set / clique / cover -------------------------------------

GraphSolution solve_clique(const Adjacency& adj, Deadline& deadline) {
  return vertex_set_solution(max_clique(adj.both, full_mask(adj.n), deadline));
}

GraphSolution solve_independent_set(const Adjacency& adj, Deadline& deadline) {
  return vertex_set_solution(max_clique(complement(adj), full_mask(adj.n), deadline));
}

GraphSolution solve_vertex_cover(const Adjacency& adj, Deadline& deadline) {
  const auto comp = complement(adj);
  const Mask all = full_mask(adj.n);
  const int alpha = popcount(max_clique(comp, all, deadline));
  // Greedy lexicographic construction: v joins the cover when some minimum
  // cover still exists containing `in` + v and avoiding `out`. Equivalently,
  // an independent set of size alpha contains `out` and avoids `in` + v.
  Mask in = 0;
  Mask out = 0;
  auto feasible = [&](Mask cover_part, Mask avoid) {
    Mask closed = avoid;
    for (Mask s = avoid; s; s &= s - 1) closed |= adj.both[lowest(s)];
    const Mask free = all & ~cover_part & ~closed;
    return popcount(avoid) + popcount(max_clique(comp, free, deadline)) >= alpha;
  };
  for (int v = 0; v < adj.n; ++v) {
    if (feasible(in | bit(v), out)) {
      in |= bit(v);
    } else {
      out |= bit(v);
    }
  }
  return vertex_set_solution(in);
}

// --- induced bipartite ------------------------------------------------------

struct BipartiteSearch {
  const Adjacency& adj;
  Deadline& deadline;
  Mask best = 0;
  int best_size = -1;

  void expand(int v, Mask kept, int size) {
    deadline.check();
    if (size + (adj.n - v) <= best_size) return;
    if (v == adj.n) {
      best = kept;
      best_size = size;
      return;
    }
    if (induced_bipartite(adj, kept | bit(v))) expand(v + 1, kept | bit(v), size + 1);
    expand(v + 1, kept, size);
  }
};

GraphSolution solve_induced_bipartite(const Adjacency& adj, Deadline& deadline) {
  BipartiteSearch search{adj, deadline};
  search.expand(0, 0, 0);
  return vertex_set_solution(search.best);
}

// --- density-objective subgraphs --------------------------------------------

std::int64_t pair_count(const Adjacency& adj, int size) {
  const std::int64_t ordered = static_cast<std::int64_t>(size) * (size - 1);
  return adj.directed ? ordered : ordered / 2;
}

std::int64_t gain(const Adjacency& adj, Mask chosen, int v) {
  std::int64_t g = 0;
  for (Mask t = adj.both[v] & chosen; t; t &= t - 1) {
    const int u = lowest(t);
    g += adj.weight[v][u];
    if (adj.directed) g += adj.weight[u][v];
  }
  return g;
}

struct MinDensitySearch {
  const Adjacency& adj;
  Deadline& deadline;
  Mask best = 0;
  std::int64_t best_weight = 0;
  std::int64_t best_pairs = 0;  // 0 while no incumbent

  void consider(Mask set, int size, std::int64_t weight) {
    if (size < 2) return;
    const std::int64_t pairs = pair_count(adj, size);
    if (best_pairs != 0) {
      const __int128 lhs = static_cast<__int128>(weight) * best_pairs;
      const __int128 rhs = static_cast<__int128>(best_weight) * pairs;
      if (lhs > rhs) return;
      if (lhs == rhs && !lex_less(set, best)) return;
    }
    if (!adj.connected_within(set)) return;
    best = set;
    best_weight = weight;
    best_pairs = pairs;
  }

  void expand(int v, Mask chosen, int size, std::int64_t weight) {
    deadline.check();
    if (v == adj.n) {
      consider(chosen, size, weight);
      return;
    }
    expand(v + 1, chosen | bit(v), size + 1, weight + gain(adj, chosen, v));
    expand(v + 1, chosen, size, weight);
  }
};

GraphSolution solve_min_density(const Adjacency& adj, Deadline& deadline) {
  MinDensitySearch search{adj, deadline};
  search.expand(0, 0, 0, 0);
  if (search.best_pairs == 0) throw PreconditionError("minimum density subgraph needs at least one edge");
  return GraphSolution{Rational(search.best_weight, search.best_pairs), VertexSet{to_list(search.best)}, true};
}

struct DensestKSearch {
  const Adjacency& adj;
  int k;
  Deadline& deadline;
  Mask best = 0;
  std::int64_t best_weight = -1;

  void expand(int v, Mask chosen, int size, std::int64_t weight) {
    deadline.check();
    if (size == k) {
      if (weight > best_weight) {
        best = chosen;
        best_weight = weight;
      }
      return;
    }
    if (size + (adj.n - v) < k) return;
    expand(v + 1, chosen | bit(v), size + 1, weight + gain(adj, chosen, v));
    expand(v + 1, chosen, size, weight);
  }
};

GraphSolution solve_densest_k(const Adjacency& adj, int k, Deadline& deadline) {
  DensestKSearch search{adj, k, deadline};
  search.expand(0, 0, 0, 0);
  return GraphSolution{Rational(search.best_weight, pair_count(adj, k)), VertexSet{to_list(search.best)}, true};
}

// --- balanced cut -----------------------------------------------------------

struct CutSearch {
  const Adjacency& adj;
  Deadline& deadline;
  int cap;  // ceil(n / 2)
  Mask best = 0;
  int best_cut = INT_MAX;

  void expand(int v, Mask a, Mask b, int cut) {
    deadline.check();
    if (cut >= best_cut) return;
    if (v == adj.n) {
      best = a;
      best_cut = cut;
      return;
    }
    if (popcount(a) < cap) expand(v + 1, a | bit(v), b, cut + popcount(adj.both[v] & b));
    if (popcount(b) < cap) expand(v + 1, a, b | bit(v), cut + popcount(adj.both[v] & a));
  }
};

GraphSolution solve_balanced_cut(const Adjacency& adj, Deadline& deadline) {
  CutSearch search{adj, deadline, (adj.n + 1) / 2};
  search.expand(1, bit(0), 0, 0);
  const Mask second = full_mask(adj.n) & ~search.best;
  return GraphSolution{Rational(search.best_cut), Partition{to_list(search.best), to_list(second)}, true};
}

// --- feedback sets and acyclic subgraphs -------------------------------------

struct FeedbackVertexSearch {
  const Adjacency& adj;
  Deadline& deadline;
  Mask removed_witness = 0;

  // Removal is tried first so the first hit at the smallest budget is the
  // lexicographically smallest minimum feedback vertex set.
  bool expand(int v, Mask removed, Mask kept, int budget) {
    deadline.check();
    if (v == adj.n) {
      removed_witness = removed;
      return true;
    }
    if (budget > 0 && expand(v + 1, removed | bit(v), kept, budget - 1)) return true;
    return stays_acyclic(adj, kept, v) && expand(v + 1, removed, kept | bit(v), budget);
  }
};

GraphSolution solve_feedback_vertex_set(const Adjacency& adj, Deadline& deadline) {
  FeedbackVertexSearch search{adj, deadline};
  for (int budget = 0; budget <= adj.n; ++budget) {
    if (search.expand(0, 0, 0, budget)) return vertex_set_solution(search.removed_witness);
  }
  throw PreconditionError("no feedback vertex set found");
}

std::vector<std::pair<int, int>> edge_list(const GraphProblem& problem) {
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : problem.edges) edges.emplace_back(e.u, e.v);
  return edges;
}

/// Kept and removed edges of a maximum acyclic edge subset.
std::pair<EdgeSet, EdgeSet> max_acyclic_edges(const GraphProblem& problem, const Adjacency& adj,
                                              Deadline& deadline) {
  EdgeSet kept;
  EdgeSet removed;
  auto edges = edge_list(problem);
  std::sort(edges.begin(), edges.end());
  if (!problem.directed) {
    std::vector<int> parent(static_cast<std::size_t>(adj.n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& [u, v] : edges) {
      const int ru = find(u);
      const int rv = find(v);
      if (ru == rv) {
        removed.edges.emplace_back(u, v);
      } else {
        parent[ru] = rv;
        kept.edges.emplace_back(u, v);
      }
    }
    return {kept, removed};
  }
  // Best linear ordering by subset DP: best[mask] = most forward edges among
  // orderings of `mask`, placing the last vertex v after all of mask \ v.
  const int n = adj.n;
  const std::size_t states = std::size_t{1} << n;
  std::vector<std::uint16_t> best(states, 0);
  for (std::size_t mask = 1; mask < states; ++mask) {
    deadline.check();
    std::uint16_t value = 0;
    for (Mask s = static_cast<Mask>(mask); s; s &= s - 1) {
      const int v = lowest(s);
      const Mask rest = static_cast<Mask>(mask) & ~bit(v);
      value = std::max<std::uint16_t>(value, static_cast<std::uint16_t>(best[rest] + popcount(adj.in[v] & rest)));
    }
    best[mask] = value;
  }
  std::vector<int> position(static_cast<std::size_t>(n), 0);
  Mask mask = full_mask(n);
  for (int slot = n - 1; slot >= 0; --slot) {
    for (Mask s = mask; s; s &= s - 1) {
      const int v = lowest(s);
      const Mask rest = mask & ~bit(v);
      if (best[rest] + popcount(adj.in[v] & rest) == best[mask]) {
        position[v] = slot;
        mask = rest;
        break;
      }
    }
  }
  for (const auto& [u, v] : edges) {
    (position[u] < position[v] ? kept : removed).edges.emplace_back(u, v);
  }
  return {kept, removed};
}

// --- paths ------------------------------------------------------------------

GraphSolution solve_longest_path(const Adjacency& adj, Deadline& deadline) {
  const int n = adj.n;
  const std::size_t states = std::size_t{1} << n;
  // rest[mask * n + v]: best additional weight from v having visited mask.
  std::vector<std::int16_t> rest(states * static_cast<std::size_t>(n), 0);
  for (std::size_t mask = states - 1; mask > 0; --mask) {
    deadline.check();
    for (Mask s = static_cast<Mask>(mask); s; s &= s - 1) {
      const int v = lowest(s);
      std::int16_t value = 0;
      for (Mask t = adj.out[v] & ~static_cast<Mask>(mask); t; t &= t - 1) {
        const int u = lowest(t);
        const auto cand = static_cast<std::int16_t>(adj.weight[v][u] + rest[(mask | bit(u)) * n + u]);
        value = std::max(value, cand);
      }
      rest[mask * n + v] = value;
    }
  }
  int start = 0;
  for (int s = 1; s < n; ++s) {
    if (rest[bit(s) * n + s] > rest[bit(start) * n + start]) start = s;
  }
  const std::int64_t total = rest[bit(start) * n + start];
  NodeSequence path{{start}};
  Mask mask = bit(start);
  int v = start;
  while (rest[mask * n + v] > 0) {
    for (Mask t = adj.out[v] & ~mask; t; t &= t - 1) {
      const int u = lowest(t);
      if (adj.weight[v][u] + rest[(mask | bit(u)) * n + u] == rest[mask * n + v]) {
        mask |= bit(u);
        v = u;
        path.nodes.push_back(u);
        break;
      }
    }
  }
  return GraphSolution{Rational(total), path, true};
}

GraphSolution solve_hamiltonian(const Adjacency& adj, bool cycle, Deadline& deadline) {
  const int n = adj.n;
  const std::size_t states = std::size_t{1} << n;
  const Mask all = full_mask(n);
  // completes[mask]: vertices v in mask from which the walk can be finished
  // having visited exactly mask.
  std::vector<Mask> completes(states, 0);
  completes[all] = cycle ? (adj.in[0] & all) : all;
  for (std::size_t m = states - 1; m-- > 1;) {
    deadline.check();
    const Mask mask = static_cast<Mask>(m);
    if (cycle && !(mask & 1)) continue;
    Mask ok = 0;
    for (Mask s = mask; s; s &= s - 1) {
      const int v = lowest(s);
      for (Mask t = adj.out[v] & ~mask; t; t &= t - 1) {
        const int u = lowest(t);
        if (completes[mask | bit(u)] & bit(u)) {
          ok |= bit(v);
          break;
        }
      }
    }
    completes[mask] = ok;
  }
  int start = -1;
  if (cycle) {
    if (completes[1] & 1) start = 0;
  } else {
    for (int s = 0; s < n && start < 0; ++s)
      if (completes[bit(s)] & bit(s)) start = s;
  }
  if (start < 0) return GraphSolution{Rational(0), NodeSequence{}, false};
  NodeSequence walk{{start}};
  Mask mask = bit(start);
  int v = start;
  while (mask != all) {
    for (Mask t = adj.out[v] & ~mask; t; t &= t - 1) {
      const int u = lowest(t);
      if (completes[mask | bit(u)] & bit(u)) {
        mask |= bit(u);
        v = u;
        walk.nodes.push_back(u);
        break;
      }
    }
  }
  return GraphSolution{Rational(n), walk, true};
}

// --- metrics ----------------------------------------------------------------

std::int64_t eccentricity_extreme(const Adjacency& adj, bool diameter) {
  const auto dist = all_pairs_shortest(adj);
  std::int64_t result = diameter ? 0 : kUnreachable;
  for (int u = 0; u < adj.n; ++u) {
    std::int64_t ecc = 0;
    for (int v = 0; v < adj.n; ++v) ecc = std::max(ecc, dist[u][v]);
    if (ecc >= kUnreachable) throw PreconditionError("diameter/radius require a (strongly) connected graph");
    result = diameter ? std::max(result, ecc) : std::min(result, ecc);
  }
  return result;
}

Rational graph_density(const GraphProblem& problem) {
  const std::int64_t n = problem.n_nodes;
  const std::int64_t possible = problem.directed ? n * (n - 1) : n * (n - 1) / 2;
  return Rational(static_cast<std::int64_t>(problem.edges.size()), possible);
}

}  // namespace

Rational density_of(const GraphProblem& problem) { return graph_density(problem); }

GraphSolution solve_exact(const GraphProblem& problem, Deadline deadline) {
  validate(problem);
  const Adjacency adj(problem);
  switch (problem.op.kind) {
    case OperatorKind::MinimumDensitySubgraph: return solve_min_density(adj, deadline);
    case OperatorKind::MaximumClique: return solve_clique(adj, deadline);
    case OperatorKind::MaximumIndependentSet: return solve_independent_set(adj, deadline);
    case OperatorKind::MinimumVertexCover: return solve_vertex_cover(adj, deadline);
    case OperatorKind::MaximumInducedBipartiteSubgraph: return solve_induced_bipartite(adj, deadline);
    case OperatorKind::MaximumAcyclicSubgraph: {
      auto [kept, removed] = max_acyclic_edges(problem, adj, deadline);
      const auto size = static_cast<std::int64_t>(kept.edges.size());
      return GraphSolution{Rational(size), std::move(kept), true};
    }
    case OperatorKind::DensestKSubgraph: return solve_densest_k(adj, problem.op.k, deadline);
    case OperatorKind::BalancedCut: return solve_balanced_cut(adj, deadline);
    case OperatorKind::FeedbackVertexSet: return solve_feedback_vertex_set(adj, deadline);
    case OperatorKind::FeedbackEdgeSet: {
      auto [kept, removed] = max_acyclic_edges(problem, adj, deadline);
      const auto size = static_cast<std::int64_t>(removed.edges.size());
      return GraphSolution{Rational(size), std::move(removed), true};
    }
    case OperatorKind::LongestPath: return solve_longest_path(adj, deadline);
    case OperatorKind::HamiltonianPath: return solve_hamiltonian(adj, false, deadline);
    case OperatorKind::HamiltonianCycle: return solve_hamiltonian(adj, true, deadline);
    case OperatorKind::GraphDiameter: {
      const auto d = eccentricity_extreme(adj, true);
      return GraphSolution{Rational(d), IntScalar{d}, true};
    }
    case OperatorKind::GraphRadius: {
      const auto r = eccentricity_extreme(adj, false);
      return GraphSolution{Rational(r), IntScalar{r}, true};
    }
    case OperatorKind::GraphDensity: {
      const Rational d = graph_density(problem);
      return GraphSolution{d, RealScalar{static_cast<double>(round_scaled(d, 3)) / 1000.0, 3}, true};
    }
  }
  throw PreconditionError("unknown graph operator");
}

}  // namespace rlvr::graph
