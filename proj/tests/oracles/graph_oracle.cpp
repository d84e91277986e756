#include "graph_oracle.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace oracle {

using rlvr::Rational;
using rlvr::graph::GraphProblem;
using rlvr::graph::OperatorKind;

namespace {

struct Mat {
  int n;
  bool directed;
  std::vector<std::vector<int>> w;  // 0 = no edge

  explicit Mat(const GraphProblem& p) : n(p.n_nodes), directed(p.directed), w(n, std::vector<int>(n, 0)) {
    for (const auto& e : p.edges) {
      w[e.u][e.v] = e.weight;
      if (!directed) w[e.v][e.u] = e.weight;
    }
  }
  bool adj(int u, int v) const { return w[u][v] || w[v][u]; }
};

bool in(unsigned mask, int v) { return (mask >> v) & 1u; }

int size_of(unsigned mask) { return __builtin_popcount(mask); }

// Cycle detection on the subgraph induced by `mask`, using an explicit edge
// list so that it also serves edge-subset checks.
bool has_cycle(int n, bool directed, const std::vector<std::pair<int, int>>& edges) {
  if (!directed) {
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (auto [u, v] : edges) {
      const int a = find(u), b = find(v);
      if (a == b) return true;
      parent[a] = b;
    }
    return false;
  }
  // Kahn's algorithm
  std::vector<int> indeg(n, 0);
  std::vector<std::vector<int>> out(n);
  for (auto [u, v] : edges) out[u].push_back(v), ++indeg[v];
  std::vector<int> queue;
  for (int i = 0; i < n; ++i)
    if (!indeg[i]) queue.push_back(i);
  std::size_t seen = 0;
  while (seen < queue.size()) {
    const int u = queue[seen++];
    for (int v : out[u])
      if (--indeg[v] == 0) queue.push_back(v);
  }
  return static_cast<int>(seen) != n;
}

std::vector<std::pair<int, int>> induced_edges(const GraphProblem& p, unsigned mask) {
  std::vector<std::pair<int, int>> out;
  for (const auto& e : p.edges)
    if (in(mask, e.u) && in(mask, e.v)) out.push_back({e.u, e.v});
  return out;
}

long induced_weight(const GraphProblem& p, unsigned mask) {
  long total = 0;
  for (const auto& e : p.edges)
    if (in(mask, e.u) && in(mask, e.v)) total += e.weight;
  return total;
}

bool weakly_connected(const Mat& g, unsigned mask) {
  if (!mask) return false;
  int start = __builtin_ctz(mask);
  unsigned seen = 1u << start;
  std::vector<int> stack{start};
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v = 0; v < g.n; ++v) {
      if (in(mask, v) && !in(seen, v) && g.adj(u, v)) {
        seen |= 1u << v;
        stack.push_back(v);
      }
    }
  }
  return seen == mask;
}

bool bipartite(const Mat& g, unsigned mask) {
  std::vector<int> color(g.n, -1);
  for (int s = 0; s < g.n; ++s) {
    if (!in(mask, s) || color[s] != -1) continue;
    color[s] = 0;
    std::vector<int> stack{s};
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < g.n; ++v) {
        if (!in(mask, v) || !g.adj(u, v)) continue;
        if (color[v] == -1) {
          color[v] = 1 - color[u];
          stack.push_back(v);
        } else if (color[v] == color[u]) {
          return false;
        }
      }
    }
  }
  return true;
}

// Longest simple path weight and whether a Hamiltonian path / cycle exists,
// all found by enumerating every simple path.
struct PathFacts {
  long longest = 0;
  bool ham_path = false;
  bool ham_cycle = false;
};

PathFacts enumerate_paths(const Mat& g) {
  PathFacts facts;
  std::vector<int> path;
  unsigned used = 0;
  std::function<void(int, long)> dfs = [&](int u, long weight) {
    facts.longest = std::max(facts.longest, weight);
    if (static_cast<int>(path.size()) == g.n) {
      facts.ham_path = true;
      if (g.w[u][path.front()]) facts.ham_cycle = true;
    }
    for (int v = 0; v < g.n; ++v) {
      if (in(used, v) || !g.w[u][v]) continue;
      used |= 1u << v;
      path.push_back(v);
      dfs(v, weight + g.w[u][v]);
      path.pop_back();
      used &= ~(1u << v);
    }
  };
  for (int s = 0; s < g.n; ++s) {
    used = 1u << s;
    path = {s};
    dfs(s, 0);
  }
  return facts;
}

std::vector<std::vector<long>> all_pairs(const Mat& g) {
  const long inf = std::numeric_limits<long>::max() / 4;
  std::vector<std::vector<long>> d(g.n, std::vector<long>(g.n, inf));
  for (int i = 0; i < g.n; ++i) {
    d[i][i] = 0;
    for (int j = 0; j < g.n; ++j)
      if (g.w[i][j]) d[i][j] = g.w[i][j];
  }
  for (int k = 0; k < g.n; ++k)
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

}  // namespace

Rational brute_force_objective(const GraphProblem& p) {
  const int n = p.n_nodes;
  if (n > kMaxOracleNodes) throw std::invalid_argument("oracle handles at most 12 nodes");
  const Mat g(p);
  const unsigned all = (1u << n) - 1;
  const auto kind = p.op.kind;

  auto best_subset = [&](auto valid, bool maximize) {
    int best = maximize ? -1 : n + 1;
    for (unsigned m = 0; m <= all; ++m) {
      if (!valid(m)) continue;
      best = maximize ? std::max(best, size_of(m)) : std::min(best, size_of(m));
    }
    return Rational(best);
  };

  switch (kind) {
    case OperatorKind::MaximumClique:
      return best_subset(
          [&](unsigned m) {
            for (int u = 0; u < n; ++u)
              for (int v = u + 1; v < n; ++v)
                if (in(m, u) && in(m, v) && !g.adj(u, v)) return false;
            return true;
          },
          true);
    case OperatorKind::MaximumIndependentSet:
      return best_subset([&](unsigned m) { return induced_edges(p, m).empty(); }, true);
    case OperatorKind::MinimumVertexCover:
      return best_subset(
          [&](unsigned m) {
            for (const auto& e : p.edges)
              if (!in(m, e.u) && !in(m, e.v)) return false;
            return true;
          },
          false);
    case OperatorKind::MaximumInducedBipartiteSubgraph:
      return best_subset([&](unsigned m) { return bipartite(g, m); }, true);
    case OperatorKind::FeedbackVertexSet:
      return best_subset([&](unsigned m) { return !has_cycle(n, p.directed, induced_edges(p, all & ~m)); }, false);
    case OperatorKind::MinimumDensitySubgraph:
    case OperatorKind::DensestKSubgraph: {
      const bool densest = kind == OperatorKind::DensestKSubgraph;
      bool found = false;
      Rational best;
      for (unsigned m = 0; m <= all; ++m) {
        const long s = size_of(m);
        if (densest ? s != p.op.k : (s < 2 || !weakly_connected(g, m))) continue;
        const Rational d(induced_weight(p, m), p.directed ? s * (s - 1) : s * (s - 1) / 2);
        if (!found || (densest ? d > best : d < best)) best = d, found = true;
      }
      return best;
    }
    case OperatorKind::BalancedCut: {
      long best = std::numeric_limits<long>::max();
      for (unsigned m = 0; m <= all; ++m) {
        if (std::abs(2 * size_of(m) - n) > 1) continue;
        long cut = 0;
        for (const auto& e : p.edges) cut += in(m, e.u) != in(m, e.v);
        best = std::min(best, cut);
      }
      return Rational(best);
    }
    case OperatorKind::MaximumAcyclicSubgraph:
    case OperatorKind::FeedbackEdgeSet: {
      const int m = static_cast<int>(p.edges.size());
      if (m > kMaxOracleEdges) throw std::invalid_argument("oracle handles at most 16 edges");
      int best = -1;
      for (unsigned s = 0; s < (1u << m); ++s) {
        std::vector<std::pair<int, int>> kept;
        for (int i = 0; i < m; ++i)
          if (in(s, i)) kept.push_back({p.edges[i].u, p.edges[i].v});
        if (!has_cycle(n, p.directed, kept)) best = std::max(best, static_cast<int>(kept.size()));
      }
      return Rational(kind == OperatorKind::MaximumAcyclicSubgraph ? best : m - best);
    }
    case OperatorKind::LongestPath: return Rational(enumerate_paths(g).longest);
    case OperatorKind::HamiltonianPath: return Rational(enumerate_paths(g).ham_path ? n : 0);
    case OperatorKind::HamiltonianCycle: return Rational(enumerate_paths(g).ham_cycle ? n : 0);
    case OperatorKind::GraphDiameter:
    case OperatorKind::GraphRadius: {
      const auto d = all_pairs(g);
      long diameter = 0, radius = std::numeric_limits<long>::max();
      for (int u = 0; u < n; ++u) {
        long ecc = 0;
        for (int v = 0; v < n; ++v) ecc = std::max(ecc, d[u][v]);
        diameter = std::max(diameter, ecc);
        radius = std::min(radius, ecc);
      }
      return Rational(kind == OperatorKind::GraphDiameter ? diameter : radius);
    }
    case OperatorKind::GraphDensity: {
      const long m = static_cast<long>(p.edges.size());
      return Rational(m, p.directed ? long(n) * (n - 1) : long(n) * (n - 1) / 2);
    }
  }
  throw std::invalid_argument("unknown operator");
}

}  // namespace oracle

namespace oracle {

rlvr::graph::GraphProblem random_small_graph(OperatorKind kind, rlvr::Rng& rng, int max_nodes) {
  using namespace rlvr::graph;
  for (;;) {
    GraphProblem p;
    p.n_nodes = static_cast<int>(rng.uniform_int(kMinNodes, max_nodes));
    p.directed = supports_directed(kind) && rng.bernoulli(0.4);
    p.weighted = supports_weighted(kind) && rng.bernoulli(0.4);
    p.op.kind = kind;
    if (kind == OperatorKind::DensestKSubgraph) p.op.k = static_cast<int>(rng.uniform_int(3, p.n_nodes - 1));
    const double density = rng.uniform_real(0.1, 0.7);
    for (int u = 0; u < p.n_nodes; ++u) {
      for (int v = 0; v < p.n_nodes; ++v) {
        if (u == v || (!p.directed && v < u)) continue;
        if (!rng.bernoulli(density)) continue;
        p.edges.push_back({u, v, p.weighted ? static_cast<int>(rng.uniform_int(1, kMaxWeight)) : 1});
      }
    }
    const bool edge_subsets = kind == OperatorKind::MaximumAcyclicSubgraph || kind == OperatorKind::FeedbackEdgeSet;
    if (edge_subsets && static_cast<int>(p.edges.size()) > kMaxOracleEdges) continue;
    rng.shuffle(std::span(p.edges));
    try {
      validate(p);
    } catch (const rlvr::DataError&) {
      continue;
    }
    return p;
  }
}

}  // namespace oracle
