#include "rlvr/problem.hpp"

namespace rlvr {

std::string make_instance_id(TaskFamily family, std::uint64_t seed, std::size_t ordinal) {
  return std::string(to_string(family)) + "-" + std::to_string(seed) + "-" + std::to_string(ordinal);
}

TaskFamily family_of(const ProblemSpec& spec) noexcept {
  switch (spec.index()) {
    case 0: return TaskFamily::Counting;
    case 1: return TaskFamily::Graph;
    default: return TaskFamily::Spatial;
  }
}

std::string render_prompt(const ProblemSpec& spec) {
  if (const auto* c = std::get_if<counting::CountingSpec>(&spec)) return counting::render_counting_prompt(*c);
  if (const auto* g = std::get_if<graph::GraphProblem>(&spec)) return graph::render_graph_prompt(*g);
  return spatial::render_spatial_prompt(std::get<spatial::SpatialProblem>(spec));
}

GroundTruth solve_truth(const ProblemSpec& spec) {
  if (const auto* c = std::get_if<counting::CountingSpec>(&spec)) return counting::evaluate_counting(*c);
  if (const auto* g = std::get_if<graph::GraphProblem>(&spec)) return graph::solve_exact(*g).witness;
  return spatial::simulate(std::get<spatial::SpatialProblem>(spec));
}

ComplexityMeta complexity_of(const ProblemSpec& spec) {
  if (const auto* c = std::get_if<counting::CountingSpec>(&spec)) {
    CountingComplexity meta;
    meta.range_scale = counting::range_scale_of(c->range_hi - c->range_lo + 1);
    meta.n_filters = c->n_filters();
    meta.n_transforms = c->n_transforms();
    meta.total_steps = meta.n_filters + meta.n_transforms;
    return meta;
  }
  if (const auto* g = std::get_if<graph::GraphProblem>(&spec)) {
    return GraphComplexity{g->n_nodes, static_cast<int>(g->edges.size()), g->directed, g->weighted};
  }
  const auto& s = std::get<spatial::SpatialProblem>(spec);
  return SpatialComplexity{static_cast<int>(s.actions.size()), s.query.kind};
}

void validate_instance(const ProblemInstance& instance, bool resolve_truth) {
  if (family_of(instance.spec) != instance.family) throw DataError("family does not match the spec payload");
  std::visit([](const auto& spec) { validate(spec); }, instance.spec);
  if (instance.prompt != render_prompt(instance.spec)) throw DataError("prompt does not match the spec");
  if (!(instance.complexity == complexity_of(instance.spec))) throw DataError("complexity metadata does not match the spec");
  if (!resolve_truth) return;
  if (!(instance.truth == solve_truth(instance.spec))) throw DataError("stored truth differs from the recomputed truth");
}

}  // namespace rlvr
