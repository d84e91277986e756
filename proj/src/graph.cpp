#include "rlvr/graph.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "graph_internal.hpp"
#include "rlvr/problem.hpp"
#include "rlvr/rng.hpp"

namespace rlvr::graph {

using namespace detail;

namespace {

constexpr std::string_view kOperatorNames[] = {
    "minimum_density_subgraph",
    "maximum_clique",
    "maximum_independent_set",
    "minimum_vertex_cover",
    "maximum_induced_bipartite_subgraph",
    "maximum_acyclic_subgraph",
    "densest_k_subgraph",
    "balanced_cut",
    "feedback_vertex_set",
    "feedback_edge_set",
    "longest_path",
    "hamiltonian_path",
    "hamiltonian_cycle",
    "graph_diameter",
    "graph_radius",
    "graph_density",
};

thread_local GenerationStats g_last_stats;

}  // namespace

std::string_view to_string(OperatorKind kind) noexcept { return kOperatorNames[static_cast<int>(kind)]; }

OperatorKind parse_operator_kind(std::string_view text) {
  for (int i = 0; i < kOperatorCount; ++i) {
    if (kOperatorNames[i] == text) return static_cast<OperatorKind>(i);
  }
  throw DataError("unknown graph operator '" + std::string(text) + "'");
}

std::vector<OperatorKind> all_operator_kinds() {
  std::vector<OperatorKind> kinds;
  for (int i = 0; i < kOperatorCount; ++i) kinds.push_back(static_cast<OperatorKind>(i));
  return kinds;
}

bool supports_directed(OperatorKind kind) noexcept {
  switch (kind) {
    case OperatorKind::MaximumClique:
    case OperatorKind::MaximumIndependentSet:
    case OperatorKind::MinimumVertexCover:
    case OperatorKind::MaximumInducedBipartiteSubgraph:
    case OperatorKind::BalancedCut:
      return false;
    default:
      return true;
  }
}

bool supports_weighted(OperatorKind kind) noexcept {
  switch (kind) {
    case OperatorKind::MinimumDensitySubgraph:
    case OperatorKind::DensestKSubgraph:
    case OperatorKind::LongestPath:
    case OperatorKind::GraphDiameter:
    case OperatorKind::GraphRadius:
      return true;
    default:
      return false;
  }
}

int node_cap(OperatorKind kind, bool directed) noexcept {
  switch (kind) {
    case OperatorKind::LongestPath:
    case OperatorKind::HamiltonianPath:
    case OperatorKind::HamiltonianCycle:
      return kMaxNodesSubsetDp;
    case OperatorKind::MaximumAcyclicSubgraph:
    case OperatorKind::FeedbackEdgeSet:
      return directed ? kMaxNodesSubsetDp : kMaxNodes;
    default:
      return kMaxNodes;
  }
}

AnswerShape answer_shape(OperatorKind kind) noexcept {
  switch (kind) {
    case OperatorKind::MaximumAcyclicSubgraph:
    case OperatorKind::FeedbackEdgeSet:
      return AnswerShape::EdgeSet;
    case OperatorKind::BalancedCut: return AnswerShape::Partition;
    case OperatorKind::LongestPath:
    case OperatorKind::HamiltonianPath:
    case OperatorKind::HamiltonianCycle:
      return AnswerShape::NodeSequence;
    case OperatorKind::GraphDiameter:
    case OperatorKind::GraphRadius:
      return AnswerShape::Integer;
    case OperatorKind::GraphDensity: return AnswerShape::Real;
    default: return AnswerShape::VertexSet;
  }
}

std::string_view to_string(Verdict verdict) noexcept {
  switch (verdict) {
    case Verdict::Correct: return "correct";
    case Verdict::Incorrect: return "incorrect";
    case Verdict::Invalid: return "invalid";
  }
  return "invalid";
}

bool is_connected(const GraphProblem& problem) {
  const Adjacency adj(problem);
  return adj.connected_within(full_mask(adj.n));
}

bool is_strongly_connected(const GraphProblem& problem) {
  const Adjacency adj(problem);
  const Mask all = full_mask(adj.n);
  auto reach = [&](const std::array<Mask, kMaxNodes>& step) {
    Mask seen = 1;
    Mask frontier = 1;
    while (frontier) {
      Mask next = 0;
      for (Mask f = frontier; f; f &= f - 1) next |= step[lowest(f)];
      next &= all & ~seen;
      seen |= next;
      frontier = next;
    }
    return seen;
  };
  return reach(adj.out) == all && reach(adj.in) == all;
}

void validate(const GraphProblem& problem) {
  const int n = problem.n_nodes;
  if (n < kMinNodes || n > kMaxNodes) {
    throw DataError("graph must have 5..25 nodes, got " + std::to_string(n));
  }
  const auto kind = problem.op.kind;
  if (problem.directed && !supports_directed(kind)) {
    throw DataError(std::string(to_string(kind)) + " is defined on undirected graphs only");
  }
  if (problem.weighted && !supports_weighted(kind)) {
    throw DataError(std::string(to_string(kind)) + " does not take edge weights");
  }
  if (n > node_cap(kind, problem.directed)) {
    throw DataError(std::string(to_string(kind)) + " instances are capped at " +
                    std::to_string(node_cap(kind, problem.directed)) + " nodes");
  }
  std::set<std::pair<int, int>> seen;
  for (const auto& e : problem.edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) throw DataError("edge endpoint out of range");
    if (e.u == e.v) throw DataError("self-loop on node " + std::to_string(e.u));
    const auto key = problem.directed ? std::pair{e.u, e.v} : std::pair{std::min(e.u, e.v), std::max(e.u, e.v)};
    if (!seen.insert(key).second) {
      throw DataError("duplicate edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
    }
    if (problem.weighted ? (e.weight < 1 || e.weight > kMaxWeight) : e.weight != 1) {
      throw DataError("edge weight must be a positive integer <= 20 (1 when unweighted)");
    }
  }
  if (kind == OperatorKind::DensestKSubgraph) {
    if (problem.op.k < 3 || problem.op.k > n - 1) throw DataError("densest_k_subgraph needs 3 <= k <= n-1");
  } else if (problem.op.k != 0) {
    throw DataError(std::string(to_string(kind)) + " takes no k");
  }
  if (kind == OperatorKind::MinimumDensitySubgraph && problem.edges.empty()) {
    throw DataError("minimum_density_subgraph needs at least one edge");
  }
  if (kind == OperatorKind::GraphDiameter || kind == OperatorKind::GraphRadius) {
    const bool ok = problem.directed ? is_strongly_connected(problem) : is_connected(problem);
    if (!ok) throw DataError("diameter/radius instances must be (strongly) connected");
  }
}

// ---------------------------------------------------------------------------
// Objective and verification
// ---------------------------------------------------------------------------

namespace {

Rational subset_density(const Adjacency& adj, Mask set) {
  const std::int64_t s = popcount(set);
  const std::int64_t pairs = adj.directed ? s * (s - 1) : s * (s - 1) / 2;
  return Rational(adj.induced_weight(set), pairs);
}

bool is_clique(const Adjacency& adj, Mask set) {
  for (Mask s = set; s; s &= s - 1) {
    const int v = lowest(s);
    if ((adj.both[v] | bit(v)) != ((adj.both[v] | bit(v)) | set)) return false;
  }
  return true;
}

bool is_independent(const Adjacency& adj, Mask set) {
  for (Mask s = set; s; s &= s - 1)
    if (adj.both[lowest(s)] & set) return false;
  return true;
}

std::int64_t cut_size(const Adjacency& adj, Mask a) {
  std::int64_t cut = 0;
  const Mask b = full_mask(adj.n) & ~a;
  for (Mask s = a; s; s &= s - 1) cut += popcount(adj.both[lowest(s)] & b);
  return cut;
}

GraphProblem with_edges(const GraphProblem& problem, const std::vector<std::pair<int, int>>& edges) {
  GraphProblem sub = problem;
  sub.weighted = false;
  sub.edges.clear();
  for (const auto& [u, v] : edges) sub.edges.push_back(Edge{u, v, 1});
  return sub;
}

bool edges_acyclic(const GraphProblem& problem, const std::vector<std::pair<int, int>>& edges) {
  const Adjacency adj(with_edges(problem, edges));
  return induced_acyclic(adj, full_mask(adj.n));
}

/// Sum of weights along `nodes`, or nullopt when a step is not an edge or a
/// node repeats.
std::optional<std::int64_t> path_weight(const Adjacency& adj, const std::vector<int>& nodes) {
  Mask seen = 0;
  std::int64_t total = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (seen & bit(nodes[i])) return std::nullopt;
    seen |= bit(nodes[i]);
    if (i > 0) {
      if (!adj.has_edge(nodes[i - 1], nodes[i])) return std::nullopt;
      total += adj.weight[nodes[i - 1]][nodes[i]];
    }
  }
  return total;
}

Verification ok() { return {Verdict::Correct, "valid optimal answer"}; }
Verification wrong(std::string detail) { return {Verdict::Incorrect, std::move(detail)}; }
Verification bad(std::string detail) { return {Verdict::Invalid, std::move(detail)}; }

}  // namespace

Rational objective_of(const GraphProblem& problem, const GroundTruth& witness) {
  const Adjacency adj(problem);
  const auto kind = problem.op.kind;
  if (const auto* set = std::get_if<VertexSet>(&witness)) {
    Mask m = 0;
    for (int v : set->nodes) m |= bit(v);
    if (kind == OperatorKind::MinimumDensitySubgraph || kind == OperatorKind::DensestKSubgraph) {
      return subset_density(adj, m);
    }
    return Rational(popcount(m));
  }
  if (const auto* edges = std::get_if<EdgeSet>(&witness)) return Rational(static_cast<std::int64_t>(edges->edges.size()));
  if (const auto* part = std::get_if<Partition>(&witness)) {
    Mask a = 0;
    for (int v : part->first) a |= bit(v);
    return Rational(cut_size(adj, a));
  }
  if (const auto* seq = std::get_if<NodeSequence>(&witness)) {
    if (kind == OperatorKind::LongestPath) return Rational(path_weight(adj, seq->nodes).value_or(0));
    return Rational(seq->nodes.empty() ? 0 : problem.n_nodes);
  }
  if (const auto* i = std::get_if<IntScalar>(&witness)) return Rational(i->value);
  if (kind == OperatorKind::GraphDensity) return density_of(problem);
  throw PreconditionError("witness kind does not match graph operator");
}

GraphSolution solution_from_truth(const GraphProblem& problem, const GroundTruth& truth) {
  GraphSolution solution{objective_of(problem, truth), truth, true};
  if (problem.op.kind == OperatorKind::HamiltonianPath || problem.op.kind == OperatorKind::HamiltonianCycle) {
    solution.exists = !std::get<NodeSequence>(truth).nodes.empty();
  }
  return solution;
}

Verification verify_value(const GraphProblem& problem, const GraphSolution& truth, const GroundTruth& candidate) {
  const Adjacency adj(problem);
  const int n = problem.n_nodes;
  const auto kind = problem.op.kind;
  auto in_range = [n](int v) { return v >= 0 && v < n; };

  switch (answer_shape(kind)) {
    case AnswerShape::VertexSet: {
      const auto* set = std::get_if<VertexSet>(&candidate);
      if (!set) return bad("expected a list of vertices");
      Mask m = 0;
      for (int v : set->nodes) {
        if (!in_range(v)) return bad("vertex " + std::to_string(v) + " is out of range");
        if (m & bit(v)) return bad("vertex " + std::to_string(v) + " listed twice");
        m |= bit(v);
      }
      const Rational target = truth.value;
      switch (kind) {
        case OperatorKind::MinimumDensitySubgraph:
          if (popcount(m) < 2) return wrong("subgraph needs at least 2 vertices");
          if (!adj.connected_within(m)) return wrong("subgraph is not connected");
          return subset_density(adj, m) == target ? ok() : wrong("density is not minimal");
        case OperatorKind::MaximumClique:
          if (!is_clique(adj, m)) return wrong("vertices do not form a clique");
          break;
        case OperatorKind::MaximumIndependentSet:
          if (!is_independent(adj, m)) return wrong("set contains an edge");
          break;
        case OperatorKind::MinimumVertexCover:
          if (!is_independent(adj, full_mask(n) & ~m)) return wrong("some edge is not covered");
          break;
        case OperatorKind::MaximumInducedBipartiteSubgraph:
          if (!induced_bipartite(adj, m)) return wrong("induced subgraph is not bipartite");
          break;
        case OperatorKind::DensestKSubgraph:
          if (popcount(m) != problem.op.k) return wrong("set must contain exactly k vertices");
          return subset_density(adj, m) == target ? ok() : wrong("induced weight is not maximal");
        case OperatorKind::FeedbackVertexSet:
          if (!induced_acyclic(adj, full_mask(n) & ~m)) return wrong("a cycle remains after removal");
          break;
        default: break;
      }
      return Rational(popcount(m)) == target ? ok() : wrong("set size is not optimal");
    }
    case AnswerShape::EdgeSet: {
      const auto* set = std::get_if<EdgeSet>(&candidate);
      if (!set) return bad("expected a list of edges");
      std::set<std::pair<int, int>> chosen;
      for (auto [u, v] : set->edges) {
        if (!in_range(u) || !in_range(v)) return bad("edge endpoint out of range");
        if (!adj.has_edge(u, v)) return bad("(" + std::to_string(u) + "," + std::to_string(v) + ") is not an edge");
        if (!problem.directed && u > v) std::swap(u, v);
        if (!chosen.insert({u, v}).second) return bad("edge listed twice");
      }
      std::vector<std::pair<int, int>> kept;
      if (kind == OperatorKind::MaximumAcyclicSubgraph) {
        kept.assign(chosen.begin(), chosen.end());
      } else {
        for (const auto& e : problem.edges) {
          auto key = problem.directed ? std::pair{e.u, e.v} : std::pair{std::min(e.u, e.v), std::max(e.u, e.v)};
          if (!chosen.count(key)) kept.push_back(key);
        }
      }
      if (!edges_acyclic(problem, kept)) return wrong("remaining edges contain a cycle");
      return Rational(static_cast<std::int64_t>(chosen.size())) == truth.value ? ok()
                                                                               : wrong("edge count is not optimal");
    }
    case AnswerShape::Partition: {
      const auto* part = std::get_if<Partition>(&candidate);
      if (!part) return bad("expected two lists of vertices");
      Mask a = 0;
      Mask b = 0;
      for (int v : part->first) {
        if (!in_range(v) || (a & bit(v))) return bad("bad vertex in first part");
        a |= bit(v);
      }
      for (int v : part->second) {
        if (!in_range(v) || (b & bit(v))) return bad("bad vertex in second part");
        b |= bit(v);
      }
      if ((a & b) || (a | b) != full_mask(n)) return wrong("parts must split every vertex exactly once");
      if (std::abs(popcount(a) - popcount(b)) > 1) return wrong("part sizes differ by more than one");
      return Rational(cut_size(adj, a)) == truth.value ? ok() : wrong("cut is not minimal");
    }
    case AnswerShape::NodeSequence: {
      const auto* seq = std::get_if<NodeSequence>(&candidate);
      if (!seq) return bad("expected a list of vertices in order");
      std::vector<int> nodes = seq->nodes;
      for (int v : nodes)
        if (!in_range(v)) return bad("vertex " + std::to_string(v) + " is out of range");
      if (kind == OperatorKind::LongestPath) {
        if (nodes.empty()) return wrong("empty path");
        const auto w = path_weight(adj, nodes);
        if (!w) return wrong("not a simple path along edges");
        return Rational(*w) == truth.value ? ok() : wrong("path is not longest");
      }
      const bool cycle = kind == OperatorKind::HamiltonianCycle;
      if (!truth.exists) return nodes.empty() ? ok() : wrong("no such walk exists");
      if (nodes.empty()) return wrong("a Hamiltonian walk exists");
      if (cycle && nodes.size() == static_cast<std::size_t>(n) + 1 && nodes.front() == nodes.back()) nodes.pop_back();
      if (nodes.size() != static_cast<std::size_t>(n)) return wrong("walk must visit every vertex exactly once");
      if (!path_weight(adj, nodes)) return wrong("not a simple path along edges");
      if (cycle && !adj.has_edge(nodes.back(), nodes.front())) return wrong("no edge closes the cycle");
      return ok();
    }
    case AnswerShape::Integer: {
      std::optional<std::int64_t> value;
      if (const auto* i = std::get_if<IntScalar>(&candidate)) value = i->value;
      if (const auto* r = std::get_if<RealScalar>(&candidate)) {
        if (r->value == static_cast<double>(static_cast<std::int64_t>(r->value))) {
          value = static_cast<std::int64_t>(r->value);
        }
      }
      if (!value) return bad("expected an integer");
      return Rational(*value) == truth.value ? ok() : wrong("value differs");
    }
    case AnswerShape::Real: {
      double value = 0;
      if (const auto* i = std::get_if<IntScalar>(&candidate)) {
        value = static_cast<double>(i->value);
      } else if (const auto* r = std::get_if<RealScalar>(&candidate)) {
        value = r->value;
      } else {
        return bad("expected a number");
      }
      return round_scaled(value, 3) == round_scaled(truth.value, 3) ? ok() : wrong("value differs at 3 decimals");
    }
  }
  return bad("unsupported answer shape");
}

// ---------------------------------------------------------------------------
// Prompt
// ---------------------------------------------------------------------------

namespace {

std::string operator_title(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::MinimumDensitySubgraph: return "minimum density subgraph";
    case OperatorKind::MaximumClique: return "maximum clique";
    case OperatorKind::MaximumIndependentSet: return "maximum independent set";
    case OperatorKind::MinimumVertexCover: return "minimum vertex cover";
    case OperatorKind::MaximumInducedBipartiteSubgraph: return "maximum induced bipartite subgraph";
    case OperatorKind::MaximumAcyclicSubgraph: return "maximum acyclic subgraph";
    case OperatorKind::DensestKSubgraph: return "densest k-subgraph";
    case OperatorKind::BalancedCut: return "balanced cut";
    case OperatorKind::FeedbackVertexSet: return "minimum feedback vertex set";
    case OperatorKind::FeedbackEdgeSet: return "minimum feedback edge set";
    case OperatorKind::LongestPath: return "longest path";
    case OperatorKind::HamiltonianPath: return "Hamiltonian path";
    case OperatorKind::HamiltonianCycle: return "Hamiltonian cycle";
    case OperatorKind::GraphDiameter: return "diameter";
    case OperatorKind::GraphRadius: return "radius";
    case OperatorKind::GraphDensity: return "density";
  }
  return {};
}

std::string operator_definition(const GraphProblem& p) {
  const bool d = p.directed;
  const std::string size = p.weighted ? "total weight of the edges" : "number of edges";
  const std::string pairs = d ? "s(s-1), the number of ordered vertex pairs" : "s(s-1)/2, the number of vertex pairs";
  const std::string cycle_word = d ? "directed cycle" : "cycle";
  const std::string any = " If multiple " + operator_title(p.op.kind) + "s exist, return any one of them.";
  switch (p.op.kind) {
    case OperatorKind::MinimumDensitySubgraph:
      return std::string("Find a set of at least 2 vertices that is connected") + (d ? " (ignoring edge directions)" : "") +
             " and whose induced subgraph has the smallest possible density, where the density of a set of s vertices "
             "is the " + size + " inside the set divided by " + pairs + "." + any;
    case OperatorKind::MaximumClique:
      return "Find the largest set of vertices in which every pair of vertices is connected by an edge." + any;
    case OperatorKind::MaximumIndependentSet:
      return "Find the largest set of vertices with no edges between them." + any;
    case OperatorKind::MinimumVertexCover:
      return "Find the smallest set of vertices such that every edge has at least one endpoint in the set." + any;
    case OperatorKind::MaximumInducedBipartiteSubgraph:
      return "Find the largest set of vertices whose induced subgraph is bipartite (its vertices can be split into two "
             "groups with no edge inside either group)." + any;
    case OperatorKind::MaximumAcyclicSubgraph:
      return "Find the largest set of edges that contains no " + cycle_word + ". Return the edges you keep." + any;
    case OperatorKind::DensestKSubgraph:
      return "Find a set of exactly " + std::to_string(p.op.k) + " vertices whose induced subgraph has the largest " +
             size + "." + " If multiple such sets exist, return any one of them.";
    case OperatorKind::BalancedCut:
      return "Split the vertices into two groups whose sizes differ by at most one so that the number of edges between "
             "the two groups is as small as possible. If multiple balanced cuts exist, return any one of them.";
    case OperatorKind::FeedbackVertexSet:
      return "Find the smallest set of vertices whose removal leaves a graph with no " + cycle_word + "." + any;
    case OperatorKind::FeedbackEdgeSet:
      return "Find the smallest set of edges whose removal leaves a graph with no " + cycle_word + "." + any;
    case OperatorKind::LongestPath:
      return std::string("Find the longest simple path (no vertex repeated)") + (d ? ", following edge directions" : "") +
             ", where the length of a path is the " + size + " on it. Return the path as the list of vertices in "
             "order. If multiple longest paths exist, return any one of them.";
    case OperatorKind::HamiltonianPath:
      return std::string("Find a path that visits every vertex exactly once") + (d ? ", following edge directions" : "") +
             ". Return it as the list of vertices in order. If no such path exists, return an empty list [].";
    case OperatorKind::HamiltonianCycle:
      return std::string("Find a cycle that visits every vertex exactly once and returns to its start") +
             (d ? ", following edge directions" : "") +
             ". Return it as the list of vertices in order without repeating the first vertex. If no such cycle "
             "exists, return an empty list [].";
    case OperatorKind::GraphDiameter:
      return std::string("Compute the largest shortest-path distance between any ") +
             (d ? "ordered pair of vertices (paths follow edge directions)" : "two vertices") + ", where distance is the " +
             (p.weighted ? "total weight of the path" : "number of edges on the path") + ".";
    case OperatorKind::GraphRadius:
      return std::string("Compute the smallest eccentricity over all vertices, where the eccentricity of a vertex is the "
                         "largest shortest-path distance from it to any other vertex") +
             (d ? " (paths follow edge directions)" : "") + " and distance is the " +
             (p.weighted ? "total weight of the path" : "number of edges on the path") + ".";
    case OperatorKind::GraphDensity:
      return std::string("Compute the number of edges divided by the number of possible edges, ") +
             (d ? "n(n-1) for a directed graph" : "n(n-1)/2 for an undirected graph") +
             ". Round the result to three decimal places.";
  }
  return {};
}

std::string answer_template(AnswerShape shape) {
  switch (shape) {
    case AnswerShape::VertexSet: return "{\"answer\": [0, 1, 2]}";
    case AnswerShape::EdgeSet: return "{\"answer\": [[0, 1], [1, 2]]}";
    case AnswerShape::Partition: return "{\"answer\": [[0, 1], [2, 3, 4]]}";
    case AnswerShape::NodeSequence: return "{\"answer\": [0, 1, 2]}";
    case AnswerShape::Integer: return "{\"answer\": 3}";
    case AnswerShape::Real: return "{\"answer\": 0.333}";
  }
  return {};
}

}  // namespace

std::string render_graph_prompt(const GraphProblem& p) {
  const std::string kind_words = std::string(p.weighted ? "weighted " : "") + (p.directed ? "directed" : "undirected");
  const std::string article = (kind_words[0] == 'u') ? "an " : "a ";
  std::string text = "Find the " + operator_title(p.op.kind) + " of " + article + kind_words + " graph with " +
                     std::to_string(p.n_nodes) + " nodes. " + operator_definition(p) + "\nGraph: Nodes: [";
  for (int v = 0; v < p.n_nodes; ++v) text += (v ? ", " : "") + std::to_string(v);
  text += "]; Edges: [";
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    const auto& e = p.edges[i];
    text += (i ? ", (" : "(") + std::to_string(e.u) + "," + std::to_string(e.v);
    if (p.weighted) text += "," + std::to_string(e.weight);
    text += ")";
  }
  text += "].";
  if (p.directed) text += " Each edge (u,v" + std::string(p.weighted ? ",w" : "") + ") points from u to v.";
  if (p.weighted) text += " In each edge (u,v,w), w is the weight.";
  text += "\nProvide your final answer as a JSON object of the form " + answer_template(answer_shape(p.op.kind)) + ".";
  return text;
}

// ---------------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------------

ProblemInstance make_graph_instance(const GraphProblem& problem, std::uint64_t seed, std::size_t ordinal,
                                    Deadline deadline) {
  validate(problem);
  ProblemInstance instance;
  instance.id = make_instance_id(TaskFamily::Graph, seed, ordinal);
  instance.family = TaskFamily::Graph;
  instance.prompt = render_graph_prompt(problem);
  instance.truth = solve_exact(problem, deadline).witness;
  instance.spec = problem;
  instance.complexity = complexity_of(instance.spec);
  instance.seed = seed;
  return instance;
}

namespace {

std::string problem_key(const GraphProblem& p) {
  std::string key = std::to_string(p.n_nodes) + (p.directed ? "d" : "u") + (p.weighted ? "w" : "-") +
                    std::to_string(static_cast<int>(p.op.kind)) + ":" + std::to_string(p.op.k);
  for (const auto& e : p.edges) key += "|" + std::to_string(e.u) + "," + std::to_string(e.v) + "," + std::to_string(e.weight);
  return key;
}

GraphProblem draw_problem(Rng& rng, const GraphConfig& config, const std::vector<OperatorKind>& ops) {
  GraphProblem p;
  p.op.kind = rng.pick(ops);
  p.directed = supports_directed(p.op.kind) && rng.bernoulli(config.directed_fraction);
  p.weighted = supports_weighted(p.op.kind) && rng.bernoulli(config.weighted_fraction);
  const int cap = std::min(config.max_nodes, node_cap(p.op.kind, p.directed));
  p.n_nodes = static_cast<int>(rng.uniform_int(config.min_nodes, std::max(config.min_nodes, cap)));
  const double density = rng.uniform_real(config.min_edge_density, config.max_edge_density);

  std::vector<std::pair<int, int>> pairs;
  for (int u = 0; u < p.n_nodes; ++u)
    for (int v = p.directed ? 0 : u + 1; v < p.n_nodes; ++v)
      if (u != v) pairs.emplace_back(u, v);
  const auto max_edges = static_cast<std::int64_t>(pairs.size());
  const std::int64_t m =
      std::clamp<std::int64_t>(static_cast<std::int64_t>(density * static_cast<double>(max_edges) + 0.5), 1, max_edges);
  rng.shuffle(std::span(pairs));
  pairs.resize(static_cast<std::size_t>(m));
  std::sort(pairs.begin(), pairs.end());
  for (const auto& [u, v] : pairs) {
    p.edges.push_back(Edge{u, v, p.weighted ? static_cast<int>(rng.uniform_int(1, kMaxWeight)) : 1});
  }
  if (p.op.kind == OperatorKind::DensestKSubgraph) p.op.k = static_cast<int>(rng.uniform_int(3, p.n_nodes - 1));
  return p;
}

}  // namespace

GenerationStats last_generation_stats() noexcept { return g_last_stats; }

std::vector<ProblemInstance> generate_graphs(const GraphConfig& config) {
  g_last_stats = {};
  if (config.min_nodes < kMinNodes || config.max_nodes > kMaxNodes || config.min_nodes > config.max_nodes) {
    throw ConfigError("node bounds must lie within [5, 25]");
  }
  if (config.min_edge_density <= 0.0 || config.max_edge_density > 1.0 ||
      config.min_edge_density > config.max_edge_density) {
    throw ConfigError("edge density bounds must satisfy 0 < min <= max <= 1");
  }
  if (config.directed_fraction < 0 || config.directed_fraction > 1 || config.weighted_fraction < 0 ||
      config.weighted_fraction > 1) {
    throw ConfigError("directed/weighted fractions must lie in [0, 1]");
  }
  std::vector<ProblemInstance> out;
  if (config.count == 0) return out;
  if (config.pinned) {
    if (config.count > 1) throw ConfigError("a pinned problem yields exactly one unique instance");
    out.push_back(make_graph_instance(*config.pinned, config.seed, 0, Deadline(config.solve_budget)));
    return out;
  }

  std::vector<OperatorKind> ops;
  for (auto kind : config.operator_whitelist.empty() ? all_operator_kinds() : config.operator_whitelist) {
    // An operator is usable when some directedness choice fits the node bounds.
    if (config.min_nodes <= node_cap(kind, false) || (supports_directed(kind) && config.min_nodes <= node_cap(kind, true))) {
      ops.push_back(kind);
    }
  }
  if (ops.empty()) throw ConfigError("no whitelisted operator can be generated within the node bounds");

  Rng rng(config.seed);
  std::unordered_set<std::string> seen;
  GenerationStats stats;
  for (std::size_t ordinal = 0; ordinal < config.count; ++ordinal) {
    bool produced = false;
    for (std::size_t attempt = 0; attempt < config.attempts_per_instance && !produced; ++attempt) {
      GraphProblem p = draw_problem(rng, config, ops);
      if (p.n_nodes > node_cap(p.op.kind, p.directed)) continue;
      try {
        validate(p);
      } catch (const DataError&) {
        continue;  // e.g. disconnected draw for diameter/radius
      }
      if (seen.count(problem_key(p))) continue;
      ++stats.draws;
      try {
        out.push_back(make_graph_instance(p, config.seed, ordinal, Deadline(config.solve_budget)));
      } catch (const SolveBudgetExceeded&) {
        ++stats.budget_rejections;
        if (stats.draws >= 20 && stats.budget_rejections * 2 > stats.draws) {
          g_last_stats = stats;
          throw ConfigError("more than half of the drawn graphs exceeded the solve budget; use smaller graphs");
        }
        continue;
      }
      seen.insert(problem_key(p));
      produced = true;
    }
    if (!produced) {
      g_last_stats = stats;
      throw GenerationBudgetError("graph generator exhausted its attempts for instance " + std::to_string(ordinal));
    }
  }
  g_last_stats = stats;
  return out;
}

}  // namespace rlvr::graph
