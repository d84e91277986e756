#include <set>

#include "../oracles/graph_oracle.hpp"
#include "doctest.h"
#include "rlvr/dataset.hpp"

using namespace rlvr;
using namespace rlvr::graph;

namespace {

GraphProblem example_graph() {
  GraphProblem p;
  p.n_nodes = 5;
  p.edges = {{0, 2, 1}, {0, 4, 1}};
  p.op.kind = OperatorKind::MaximumIndependentSet;
  return p;
}

GraphProblem cycle_graph(int n, OperatorKind kind, bool directed = false) {
  GraphProblem p;
  p.n_nodes = n;
  p.directed = directed;
  p.op.kind = kind;
  for (int i = 0; i < n; ++i) p.edges.push_back({i, (i + 1) % n, 1});
  return p;
}

Verdict verdict_of(const GraphProblem& p, const GroundTruth& candidate) {
  return verify_value(p, solve_exact(p), candidate).verdict;
}

}  // namespace

TEST_SUITE("graph") {
  TEST_CASE("worked example: maximum independent set") {
    const auto p = example_graph();
    const auto solution = solve_exact(p);
    CHECK(solution.value == Rational(4));
    CHECK(solution.witness == GroundTruth{VertexSet{{1, 2, 3, 4}}});
    CHECK(verdict_of(p, VertexSet{{1, 2, 3, 4}}) == Verdict::Correct);
    CHECK(verdict_of(p, VertexSet{{4, 3, 2, 1}}) == Verdict::Correct);
    CHECK(verdict_of(p, VertexSet{{2, 3, 4}}) == Verdict::Incorrect);
    CHECK(verdict_of(p, VertexSet{{0, 2}}) == Verdict::Incorrect);
    CHECK(verdict_of(p, VertexSet{{1, 2, 3, 9}}) == Verdict::Invalid);
    CHECK(verdict_of(p, IntScalar{4}) == Verdict::Invalid);
    CHECK(render_graph_prompt(p).rfind(
              "Find the maximum independent set of an undirected graph with 5 nodes. Find the largest set of vertices "
              "with no edges between them. If multiple maximum independent sets exist, return any one of them.\n"
              "Graph: Nodes: [0, 1, 2, 3, 4]; Edges: [(0,2), (0,4)].",
              0) == 0);
  }

  TEST_CASE("any co-optimal witness is accepted") {
    // A 6-cycle has two maximum independent sets.
    const auto p = cycle_graph(6, OperatorKind::MaximumIndependentSet);
    CHECK(verdict_of(p, VertexSet{{0, 2, 4}}) == Verdict::Correct);
    CHECK(verdict_of(p, VertexSet{{1, 3, 5}}) == Verdict::Correct);
    const auto cover = cycle_graph(6, OperatorKind::MinimumVertexCover);
    CHECK(verdict_of(cover, VertexSet{{0, 2, 4}}) == Verdict::Correct);
    CHECK(verdict_of(cover, VertexSet{{0, 1, 3}}) == Verdict::Incorrect);
    const auto fes = cycle_graph(5, OperatorKind::FeedbackEdgeSet);
    CHECK(verdict_of(fes, EdgeSet{{{2, 3}}}) == Verdict::Correct);
    CHECK(verdict_of(fes, EdgeSet{{{3, 2}}}) == Verdict::Correct);
    CHECK(verdict_of(fes, EdgeSet{{{1, 3}}}) == Verdict::Invalid);
  }

  TEST_CASE("path and cycle answers") {
    const auto ham = cycle_graph(6, OperatorKind::HamiltonianCycle);
    CHECK(verdict_of(ham, NodeSequence{{2, 3, 4, 5, 0, 1}}) == Verdict::Correct);
    CHECK(verdict_of(ham, NodeSequence{{2, 1, 0, 5, 4, 3}}) == Verdict::Correct);
    CHECK(verdict_of(ham, NodeSequence{{0, 1, 2, 3, 4, 5, 0}}) == Verdict::Correct);
    CHECK(verdict_of(ham, NodeSequence{{0, 2, 1, 3, 4, 5}}) == Verdict::Incorrect);
    CHECK(verdict_of(ham, NodeSequence{}) == Verdict::Incorrect);

    auto directed = cycle_graph(6, OperatorKind::HamiltonianCycle, true);
    CHECK(verdict_of(directed, NodeSequence{{0, 1, 2, 3, 4, 5}}) == Verdict::Correct);
    CHECK(verdict_of(directed, NodeSequence{{5, 4, 3, 2, 1, 0}}) == Verdict::Incorrect);

    GraphProblem star;
    star.n_nodes = 5;
    star.op.kind = OperatorKind::HamiltonianPath;
    star.edges = {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {0, 4, 1}};
    const auto none = solve_exact(star);
    CHECK_FALSE(none.exists);
    CHECK(none.witness == GroundTruth{NodeSequence{}});
    CHECK(verdict_of(star, NodeSequence{}) == Verdict::Correct);
    CHECK(solution_from_truth(star, none.witness).exists == false);

    auto longest = cycle_graph(5, OperatorKind::LongestPath);
    longest.weighted = true;
    longest.edges[2].weight = 9;
    CHECK(solve_exact(longest).value == Rational(12));
  }

  TEST_CASE("metrics") {
    const auto diam = cycle_graph(6, OperatorKind::GraphDiameter);
    CHECK(solve_exact(diam).witness == GroundTruth{IntScalar{3}});
    const auto rad = cycle_graph(6, OperatorKind::GraphRadius, true);
    CHECK(solve_exact(rad).witness == GroundTruth{IntScalar{5}});
    const auto dens = cycle_graph(6, OperatorKind::GraphDensity);
    const auto s = solve_exact(dens);
    CHECK(s.value == Rational(6, 15));
    CHECK(s.witness == GroundTruth{RealScalar{0.4, 3}});
    CHECK(verdict_of(dens, RealScalar{0.4, 1}) == Verdict::Correct);
    CHECK(verdict_of(dens, RealScalar{0.401, 3}) == Verdict::Incorrect);
  }

  TEST_CASE("validate rejects broken instances") {
    auto p = example_graph();
    p.n_nodes = 4;
    CHECK_THROWS_AS(validate(p), DataError);
    p = example_graph();
    p.directed = true;
    CHECK_THROWS_AS(validate(p), DataError);
    p = example_graph();
    p.edges.push_back({2, 0, 1});
    CHECK_THROWS_AS(validate(p), DataError);
    p = example_graph();
    p.edges.push_back({3, 3, 1});
    CHECK_THROWS_AS(validate(p), DataError);
    p = example_graph();
    p.op.kind = OperatorKind::GraphDiameter;
    CHECK_THROWS_AS(validate(p), DataError);
    p = cycle_graph(6, OperatorKind::DensestKSubgraph);
    p.op.k = 6;
    CHECK_THROWS_AS(validate(p), DataError);
    p = cycle_graph(21, OperatorKind::HamiltonianPath);
    CHECK_THROWS_AS(validate(p), DataError);
  }

  TEST_CASE("solver agrees with exhaustive enumeration on small graphs") {
    Rng rng(77);
    for (auto kind : all_operator_kinds()) {
      for (int i = 0; i < 25; ++i) {
        const auto p = oracle::random_small_graph(kind, rng);
        const auto solution = solve_exact(p);
        INFO(to_json(ProblemSpec{p}).dump());
        REQUIRE(solution.value == oracle::brute_force_objective(p));
        REQUIRE(verify_value(p, solution, solution.witness).verdict == Verdict::Correct);
        REQUIRE(objective_of(p, solution.witness) == solution.value);
      }
    }
  }

  TEST_CASE("vertex-set witnesses are lexicographically smallest") {
    const auto p = cycle_graph(6, OperatorKind::MaximumIndependentSet);
    CHECK(solve_exact(p).witness == GroundTruth{VertexSet{{0, 2, 4}}});
  }

  TEST_CASE("solver budget is enforced") {
    GraphProblem p;
    p.n_nodes = 20;
    p.directed = true;
    p.op.kind = OperatorKind::LongestPath;
    for (int u = 0; u < 20; ++u)
      for (int v = 0; v < 20; ++v)
        if (u != v && (u * 7 + v * 3) % 5 < 3) p.edges.push_back({u, v, 1});
    CHECK_THROWS_AS(solve_exact(p, Deadline(std::chrono::milliseconds(0))), SolveBudgetExceeded);
  }

  TEST_CASE("generator produces valid, unique, verified instances") {
    GraphConfig config;
    config.count = 80;
    config.seed = 5;
    config.max_nodes = 14;
    const auto a = generate_graphs(config);
    REQUIRE(a.size() == 80);
    CHECK(a == generate_graphs(config));
    std::set<std::string> keys;
    for (const auto& inst : a) {
      const auto& p = std::get<GraphProblem>(inst.spec);
      CHECK_NOTHROW(validate(p));
      CHECK(p.n_nodes <= 14);
      CHECK(keys.insert(to_json(inst.spec).dump()).second);
      CHECK(verify_value(p, solution_from_truth(p, inst.truth), inst.truth).verdict == Verdict::Correct);
    }
  }

  TEST_CASE("generator whitelist and configuration errors") {
    GraphConfig config;
    config.count = 20;
    config.operator_whitelist = {OperatorKind::HamiltonianCycle};
    for (const auto& inst : generate_graphs(config)) {
      const auto& p = std::get<GraphProblem>(inst.spec);
      CHECK(p.op.kind == OperatorKind::HamiltonianCycle);
      CHECK(p.n_nodes <= kMaxNodesSubsetDp);
    }
    config = {};
    config.min_nodes = 3;
    CHECK_THROWS_AS(generate_graphs(config), ConfigError);
    config = {};
    config.min_edge_density = 0.9;
    config.max_edge_density = 0.1;
    CHECK_THROWS_AS(generate_graphs(config), ConfigError);
  }

  TEST_CASE("operator metadata") {
    CHECK(all_operator_kinds().size() == kOperatorCount);
    for (auto k : all_operator_kinds()) CHECK(parse_operator_kind(to_string(k)) == k);
    CHECK(answer_shape(OperatorKind::BalancedCut) == AnswerShape::Partition);
    CHECK(node_cap(OperatorKind::FeedbackEdgeSet, true) == kMaxNodesSubsetDp);
    CHECK(node_cap(OperatorKind::FeedbackEdgeSet, false) == kMaxNodes);
  }
}
