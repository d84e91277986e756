#include "rlvr/rewards.hpp"

#include <algorithm>

namespace rlvr::rewards {

using parsing::FormatClass;
using parsing::ParseStatus;

namespace {

constexpr std::string_view kCategoryNames[] = {
    "correct_well_formatted", "correct_other_format", "incorrect_well_formatted", "extraction_failure", "cutoff",
};

// Components are accumulated in hundredths so totals such as 1.1 and -0.4
// come out as the exact nearest doubles.
double hundredths(int h) { return h / 100.0; }

}  // namespace

std::string_view to_string(TelemetryCategory category) noexcept { return kCategoryNames[static_cast<int>(category)]; }

TelemetryCategory parse_category(std::string_view text) {
  for (int i = 0; i < kCategoryCount; ++i)
    if (kCategoryNames[i] == text) return static_cast<TelemetryCategory>(i);
  throw DataError("unknown telemetry category '" + std::string(text) + "'");
}

bool well_formatted(const parsing::ParsedAnswer& parsed, TaskFamily family) noexcept {
  if (parsed.status != ParseStatus::Extracted) return false;
  if (family == TaskFamily::Counting) return parsed.format_class == FormatClass::CanonicalAnswerLine;
  return parsed.format_class == FormatClass::JsonObject || parsed.format_class == FormatClass::JsonCodeBlock;
}

TelemetryCategory categorize(const parsing::ParsedAnswer& parsed, bool correct, TaskFamily family) noexcept {
  if (parsed.status == ParseStatus::Truncated) return TelemetryCategory::Cutoff;
  if (parsed.status == ParseStatus::ExtractionFailed) return TelemetryCategory::ExtractionFailure;
  if (!correct) return TelemetryCategory::IncorrectWellFormatted;
  return well_formatted(parsed, family) ? TelemetryCategory::CorrectWellFormatted
                                        : TelemetryCategory::CorrectOtherFormat;
}

RewardBreakdown reward_counting(const parsing::ParsedAnswer& parsed, bool correct) {
  correct = correct && parsed.status == ParseStatus::Extracted;
  const int correctness = correct ? 100 : 0;
  int format = -10;
  if (parsed.status == ParseStatus::Extracted) {
    switch (parsed.format_class) {
      case FormatClass::CanonicalAnswerLine: format = 10; break;
      case FormatClass::AcceptableVariant:
      case FormatClass::BareValue: format = 5; break;
      default: format = -10; break;
    }
  }
  const int steps = -10 * std::min(3, std::max(0, parsed.step_count - 5));
  RewardBreakdown r;
  r.correctness = hundredths(correctness);
  r.format_bonus = hundredths(format);
  r.step_penalty = hundredths(steps);
  r.total = hundredths(std::clamp(correctness + format + steps, -40, 110));
  r.category = categorize(parsed, correct, TaskFamily::Counting);
  return r;
}

RewardBreakdown reward_graph(const parsing::ParsedAnswer& parsed, graph::Verdict verdict,
                             std::size_t completion_length, std::size_t length_threshold) {
  const bool extracted = parsed.status == ParseStatus::Extracted;
  const bool correct = extracted && verdict == graph::Verdict::Correct;
  int correctness = 0;
  int format = 0;
  if (!extracted) {
    format = -20;
  } else {
    correctness = correct ? 100 : 0;
    format = well_formatted(parsed, TaskFamily::Graph) ? 10 : 0;
  }
  int length = 0;
  if (completion_length > length_threshold) length = -20 - (correctness + format);
  RewardBreakdown r;
  r.correctness = hundredths(correctness);
  r.format_bonus = hundredths(format);
  r.length_penalty = hundredths(length);
  r.total = hundredths(std::clamp(correctness + format + length, -20, 110));
  r.category = categorize(parsed, correct, TaskFamily::Graph);
  return r;
}

RewardBreakdown reward_spatial(const parsing::ParsedAnswer& parsed, bool correct) {
  correct = correct && parsed.status == ParseStatus::Extracted;
  RewardBreakdown r;
  r.correctness = correct ? 1.0 : 0.0;
  r.total = r.correctness;
  r.category = categorize(parsed, correct, TaskFamily::Spatial);
  return r;
}

}  // namespace rlvr::rewards
