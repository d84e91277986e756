#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rlvr/core.hpp"

namespace rlvr {

struct ProblemInstance;

namespace graph {

inline constexpr int kMinNodes = 5;
inline constexpr int kMaxNodes = 25;
/// Node cap for operators solved by subset dynamic programming.
inline constexpr int kMaxNodesSubsetDp = 20;
inline constexpr int kMaxWeight = 20;

enum class OperatorKind {
  MinimumDensitySubgraph,
  MaximumClique,
  MaximumIndependentSet,
  MinimumVertexCover,
  MaximumInducedBipartiteSubgraph,
  MaximumAcyclicSubgraph,
  DensestKSubgraph,
  BalancedCut,
  FeedbackVertexSet,
  FeedbackEdgeSet,
  LongestPath,
  HamiltonianPath,
  HamiltonianCycle,
  GraphDiameter,
  GraphRadius,
  GraphDensity,
};

inline constexpr int kOperatorCount = 16;

std::string_view to_string(OperatorKind kind) noexcept;
OperatorKind parse_operator_kind(std::string_view text);
std::vector<OperatorKind> all_operator_kinds();

bool supports_directed(OperatorKind kind) noexcept;
bool supports_weighted(OperatorKind kind) noexcept;
/// Largest node count the generator uses for this operator (and directedness).
int node_cap(OperatorKind kind, bool directed) noexcept;

/// Shape of the answer an operator expects.
enum class AnswerShape { VertexSet, EdgeSet, NodeSequence, Partition, Integer, Real };
AnswerShape answer_shape(OperatorKind kind) noexcept;

struct GraphOperator {
  OperatorKind kind = OperatorKind::MaximumIndependentSet;
  int k = 0;  // DensestKSubgraph only
  friend bool operator==(const GraphOperator&, const GraphOperator&) = default;
};

struct Edge {
  int u = 0;
  int v = 0;
  int weight = 1;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct GraphProblem {
  int n_nodes = 0;  // nodes are 0..n_nodes-1
  std::vector<Edge> edges;
  bool directed = false;
  bool weighted = false;
  GraphOperator op;
  friend bool operator==(const GraphProblem&, const GraphProblem&) = default;
};

/// Throws DataError when a structural invariant is violated.
void validate(const GraphProblem& problem);

struct GraphSolution {
  Rational value;       // optimal objective
  GroundTruth witness;  // satisfies the validity predicate and attains value
  bool exists = true;   // Hamiltonian operators only
};

class SolveBudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Cooperative wall-clock budget polled inside search loops.
class Deadline {
 public:
  Deadline() = default;
  explicit Deadline(std::chrono::milliseconds budget)
      : end_(std::chrono::steady_clock::now() + budget), armed_(true) {}

  void check() {
    if (!armed_) return;
    if ((++ticks_ & 0xfff) == 0 && std::chrono::steady_clock::now() > end_) {
      throw SolveBudgetExceeded("per-instance solve budget exceeded");
    }
  }

 private:
  std::chrono::steady_clock::time_point end_{};
  bool armed_ = false;
  std::uint64_t ticks_ = 0;
};

inline constexpr std::chrono::milliseconds kDefaultSolveBudget{10'000};

/// Exact optimum with a deterministic witness (lexicographically smallest
/// for vertex-set operators).
GraphSolution solve_exact(const GraphProblem& problem, Deadline deadline = Deadline{});

/// Objective of a witness that is already known to be valid.
Rational objective_of(const GraphProblem& problem, const GroundTruth& witness);

/// Rebuild the full solution from a stored witness.
GraphSolution solution_from_truth(const GraphProblem& problem, const GroundTruth& truth);

enum class Verdict { Correct, Incorrect, Invalid };
std::string_view to_string(Verdict verdict) noexcept;

struct Verification {
  Verdict verdict = Verdict::Invalid;
  std::string detail;
};

/// Check a candidate answer value. Any co-optimal witness is correct.
Verification verify_value(const GraphProblem& problem, const GraphSolution& truth, const GroundTruth& candidate);

std::string render_graph_prompt(const GraphProblem& problem);

struct GraphConfig {
  std::size_t count = 1;
  int min_nodes = kMinNodes;
  int max_nodes = kMaxNodes;
  double min_edge_density = 0.15;
  double max_edge_density = 0.5;
  std::vector<OperatorKind> operator_whitelist;  // empty means "all"
  double directed_fraction = 0.25;
  double weighted_fraction = 0.25;
  std::uint64_t seed = 0;
  std::chrono::milliseconds solve_budget = kDefaultSolveBudget;
  std::size_t attempts_per_instance = 10'000;
  std::optional<GraphProblem> pinned;
};

ProblemInstance make_graph_instance(const GraphProblem& problem, std::uint64_t seed, std::size_t ordinal,
                                    Deadline deadline = Deadline{});

std::vector<ProblemInstance> generate_graphs(const GraphConfig& config);

/// Statistics of the last generate_graphs call on this thread.
struct GenerationStats {
  std::size_t draws = 0;
  std::size_t budget_rejections = 0;
};
GenerationStats last_generation_stats() noexcept;

// Helpers shared with tests and the scoring path.
bool is_connected(const GraphProblem& problem);
bool is_strongly_connected(const GraphProblem& problem);

}  // namespace graph
}  // namespace rlvr
