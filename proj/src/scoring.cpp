#include "rlvr/scoring.hpp"

namespace rlvr {

ScoreResult score_completion(const ProblemInstance& problem, const parsing::Completion& completion,
                             const ScoreOptions& options) {
  ScoreResult result;
  result.parsed = parsing::parse_for(problem, completion);
  if (options.normalizer && problem.family != TaskFamily::Counting &&
      result.parsed.status == parsing::ParseStatus::ExtractionFailed) {
    try {
      result.parsed = parsing::normalize_with_fallback(completion, result.parsed, problem, *options.normalizer);
    } catch (const parsing::NormalizerUnavailable&) {
      result.normalizer_unavailable = true;
    }
  }
  const bool extracted = result.parsed.status == parsing::ParseStatus::Extracted;
  switch (problem.family) {
    case TaskFamily::Counting:
      result.correct = extracted && parsing::match_value(result.parsed, problem.truth);
      result.reward = rewards::reward_counting(result.parsed, result.correct);
      break;
    case TaskFamily::Graph: {
      const auto& g = std::get<graph::GraphProblem>(problem.spec);
      result.verification = {graph::Verdict::Invalid, "no answer extracted"};
      if (extracted) {
        result.verification = graph::verify_value(g, graph::solution_from_truth(g, problem.truth), *result.parsed.value);
      }
      result.correct = result.verification.verdict == graph::Verdict::Correct;
      result.reward = rewards::reward_graph(result.parsed, result.verification.verdict, completion.text.size(),
                                            options.length_threshold);
      break;
    }
    case TaskFamily::Spatial:
      result.correct = extracted && parsing::match_value(result.parsed, problem.truth);
      result.reward = rewards::reward_spatial(result.parsed, result.correct);
      break;
  }
  return result;
}

}  // namespace rlvr
