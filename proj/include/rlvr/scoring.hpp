#pragma once

#include <optional>

#include "rlvr/parsing.hpp"
#include "rlvr/rewards.hpp"

namespace rlvr {

struct ScoreOptions {
  parsing::Normalizer* normalizer = nullptr;  // graph and spatial fallback
  std::size_t length_threshold = rewards::kDefaultLengthThreshold;
};

struct ScoreResult {
  parsing::ParsedAnswer parsed;
  graph::Verification verification;  // graph problems only
  bool correct = false;
  rewards::RewardBreakdown reward;
  bool normalizer_unavailable = false;
};

/// Parse, verify and reward one completion against a stored problem. The
/// truth is taken from the instance; solvers are never re-run.
ScoreResult score_completion(const ProblemInstance& problem, const parsing::Completion& completion,
                             const ScoreOptions& options = {});

}  // namespace rlvr
