#include <set>

#include "../oracles/completion_fuzz.hpp"
#include "doctest.h"
#include "rlvr/scoring.hpp"

using namespace rlvr;
using namespace rlvr::rewards;
using parsing::FormatClass;
using parsing::ParsedAnswer;
using parsing::ParseStatus;

namespace {

ParsedAnswer extracted(FormatClass format, int steps = 0) {
  ParsedAnswer p;
  p.status = ParseStatus::Extracted;
  p.value = IntScalar{1};
  p.format_class = format;
  p.step_count = steps;
  return p;
}

ParsedAnswer failed(ParseStatus status = ParseStatus::ExtractionFailed, int steps = 0) {
  ParsedAnswer p;
  p.status = status;
  p.step_count = steps;
  return p;
}

ProblemInstance counting_example() {
  counting::CountingSpec spec;
  spec.range_lo = 1;
  spec.range_hi = 100;
  spec.pipeline = {{counting::StepKind::KeepEven, 0}, {counting::StepKind::KeepDivisibleBy, 3}};
  return counting::make_counting_instance(spec, 0, 0);
}

ProblemInstance graph_example() {
  graph::GraphProblem p;
  p.n_nodes = 5;
  p.edges = {{0, 2, 1}, {0, 4, 1}};
  return graph::make_graph_instance(p, 0, 0);
}

}  // namespace

TEST_SUITE("rewards") {
  TEST_CASE("counting reward components") {
    CHECK(reward_counting(extracted(FormatClass::CanonicalAnswerLine), true).total == 1.1);
    CHECK(reward_counting(extracted(FormatClass::AcceptableVariant), true).total == 1.05);
    CHECK(reward_counting(extracted(FormatClass::BareValue), false).total == 0.05);
    CHECK(reward_counting(failed(), false).total == -0.1);
    CHECK(reward_counting(extracted(FormatClass::CanonicalAnswerLine, 6), true).total == 1.0);
    CHECK(reward_counting(extracted(FormatClass::CanonicalAnswerLine, 8), true).step_penalty == -0.3);
    CHECK(reward_counting(extracted(FormatClass::CanonicalAnswerLine, 50), true).step_penalty == -0.3);
    CHECK(reward_counting(failed(ParseStatus::ExtractionFailed, 20), false).total == -0.4);
    // A "correct" flag without an extracted value never earns correctness.
    CHECK(reward_counting(failed(), true).correctness == 0.0);
  }

  TEST_CASE("graph reward table") {
    using graph::Verdict;
    CHECK(reward_graph(failed(), Verdict::Invalid, 10).total == -0.2);
    CHECK(reward_graph(extracted(FormatClass::JsonObject), Verdict::Correct, 10).total == 1.1);
    CHECK(reward_graph(extracted(FormatClass::JsonCodeBlock), Verdict::Correct, 10).total == 1.1);
    CHECK(reward_graph(extracted(FormatClass::BareValue), Verdict::Correct, 10).total == 1.0);
    CHECK(reward_graph(extracted(FormatClass::AcceptableVariant), Verdict::Correct, 10).total == 1.0);
    CHECK(reward_graph(extracted(FormatClass::JsonObject), Verdict::Incorrect, 10).total == 0.1);
    CHECK(reward_graph(extracted(FormatClass::JsonObject), Verdict::Invalid, 10).total == 0.1);
    CHECK(reward_graph(extracted(FormatClass::BareValue), Verdict::Incorrect, 10).total == 0.0);
    const auto long_correct = reward_graph(extracted(FormatClass::JsonObject), Verdict::Correct, 8193);
    CHECK(long_correct.total == -0.2);
    CHECK(long_correct.length_penalty == -1.3);
    CHECK(reward_graph(extracted(FormatClass::JsonObject), Verdict::Correct, 8192).total == 1.1);
    CHECK(reward_graph(extracted(FormatClass::JsonObject), Verdict::Correct, 101, 100).total == -0.2);
  }

  TEST_CASE("spatial reward is binary") {
    CHECK(reward_spatial(extracted(FormatClass::JsonObject), true).total == 1.0);
    CHECK(reward_spatial(extracted(FormatClass::BareValue), true).total == 1.0);
    CHECK(reward_spatial(extracted(FormatClass::JsonObject), false).total == 0.0);
    CHECK(reward_spatial(failed(), false).total == 0.0);
  }

  TEST_CASE("telemetry categories") {
    CHECK(categorize(failed(ParseStatus::Truncated), false, TaskFamily::Graph) == TelemetryCategory::Cutoff);
    CHECK(categorize(failed(), false, TaskFamily::Graph) == TelemetryCategory::ExtractionFailure);
    CHECK(categorize(extracted(FormatClass::BareValue), false, TaskFamily::Graph) ==
          TelemetryCategory::IncorrectWellFormatted);
    CHECK(categorize(extracted(FormatClass::JsonObject), true, TaskFamily::Spatial) ==
          TelemetryCategory::CorrectWellFormatted);
    CHECK(categorize(extracted(FormatClass::BareValue), true, TaskFamily::Spatial) ==
          TelemetryCategory::CorrectOtherFormat);
    CHECK(categorize(extracted(FormatClass::CanonicalAnswerLine), true, TaskFamily::Counting) ==
          TelemetryCategory::CorrectWellFormatted);
    CHECK(categorize(extracted(FormatClass::JsonObject), true, TaskFamily::Counting) ==
          TelemetryCategory::CorrectOtherFormat);
    for (int i = 0; i < kCategoryCount; ++i) {
      const auto c = static_cast<TelemetryCategory>(i);
      CHECK(parse_category(to_string(c)) == c);
    }
  }

  TEST_CASE("scoring the worked examples") {
    const auto counting = counting_example();
    const auto r = score_completion(counting, {"Answer: 16"});
    CHECK(r.correct);
    CHECK(r.reward.total == 1.1);
    CHECK(score_completion(counting, {"Answer: 15"}).reward.total == 0.1);

    const auto graph = graph_example();
    CHECK(score_completion(graph, {"{\"answer\": [1, 2, 3, 4]}"}).reward.total == 1.1);
    CHECK(score_completion(graph, {"[4, 3, 2, 1]"}).reward.total == 1.0);
    const auto wrong = score_completion(graph, {"{\"answer\": [2, 3, 4]}"});
    CHECK_FALSE(wrong.correct);
    CHECK(wrong.verification.verdict == graph::Verdict::Incorrect);
    CHECK(wrong.reward.total == 0.1);
  }

  TEST_CASE("normalizer fallback") {
    const auto graph = graph_example();
    parsing::StubNormalizer stub;
    ScoreOptions options{&stub};
    const parsing::Completion free_form{"I pick the vertices 1, 2, 3 and 4"};
    CHECK(score_completion(graph, free_form).reward.total == -0.2);
    const auto r = score_completion(graph, free_form, options);
    CHECK(r.parsed.via_normalizer);
    CHECK(r.parsed.format_class == FormatClass::AcceptableVariant);
    CHECK(r.correct);
    CHECK(r.reward.total == 1.0);
    CHECK(r.reward.category == TelemetryCategory::CorrectOtherFormat);

    CHECK_THROWS_AS(parsing::normalize_with_fallback(free_form, extracted(FormatClass::JsonObject), graph, stub),
                    PreconditionError);
    CHECK_THROWS_AS(parsing::normalize_with_fallback(free_form, failed(), counting_example(), stub),
                    PreconditionError);

    struct Down : parsing::Normalizer {
      std::string canonicalize(const ProblemInstance&, const std::string&) override {
        throw parsing::NormalizerUnavailable("offline");
      }
    } down;
    const auto unavailable = score_completion(graph, free_form, {&down});
    CHECK(unavailable.normalizer_unavailable);
    CHECK(unavailable.reward.total == -0.2);
    CHECK(unavailable.reward.category == TelemetryCategory::ExtractionFailure);
  }

  TEST_CASE("fuzzed rewards stay in range") {
    counting::CountingConfig cc;
    cc.count = 30;
    graph::GraphConfig gc;
    gc.count = 30;
    gc.max_nodes = 12;
    spatial::SpatialConfig sc;
    sc.count = 30;
    Rng rng(5);
    for (const auto& batch : {counting::generate_counting(cc), graph::generate_graphs(gc), spatial::generate_spatial(sc)}) {
      for (int i = 0; i < 3000; ++i) {
        const auto& p = batch[rng.index(batch.size())];
        const auto c = oracle::fuzz_completion(p.truth, p.family, rng);
        const double total = score_completion(p, c).reward.total;
        switch (p.family) {
          case TaskFamily::Counting: REQUIRE((total >= -0.4 && total <= 1.1)); break;
          case TaskFamily::Graph: REQUIRE((total >= -0.2 && total <= 1.1)); break;
          case TaskFamily::Spatial: REQUIRE((total == 0.0 || total == 1.0)); break;
        }
      }
    }
  }
}
