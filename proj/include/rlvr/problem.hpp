#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "rlvr/core.hpp"
#include "rlvr/counting.hpp"
#include "rlvr/graph.hpp"
#include "rlvr/spatial.hpp"

namespace rlvr {

using ProblemSpec = std::variant<counting::CountingSpec, graph::GraphProblem, spatial::SpatialProblem>;

/// One generated task. The prompt and truth are pure functions of `spec`.
struct ProblemInstance {
  std::string id;
  TaskFamily family = TaskFamily::Counting;
  std::string prompt;
  ProblemSpec spec;
  GroundTruth truth;
  ComplexityMeta complexity;
  std::uint64_t seed = 0;

  friend bool operator==(const ProblemInstance&, const ProblemInstance&) = default;
};

/// "{family}-{seed}-{ordinal}".
std::string make_instance_id(TaskFamily family, std::uint64_t seed, std::size_t ordinal);

TaskFamily family_of(const ProblemSpec& spec) noexcept;

std::string render_prompt(const ProblemSpec& spec);

/// Recompute the ground truth from the spec (re-solves graphs).
GroundTruth solve_truth(const ProblemSpec& spec);

ComplexityMeta complexity_of(const ProblemSpec& spec);

/// Re-check every instance invariant: spec validity, family agreement,
/// prompt and truth reproduction, complexity agreement. Throws DataError.
void validate_instance(const ProblemInstance& instance, bool resolve_truth = true);

}  // namespace rlvr
