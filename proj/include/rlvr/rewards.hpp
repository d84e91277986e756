#pragma once

#include <cstddef>
#include <string_view>

#include "rlvr/graph.hpp"
#include "rlvr/parsing.hpp"

namespace rlvr::rewards {

enum class TelemetryCategory { CorrectWellFormatted, CorrectOtherFormat, IncorrectWellFormatted, ExtractionFailure, Cutoff };
inline constexpr int kCategoryCount = 5;

std::string_view to_string(TelemetryCategory category) noexcept;
TelemetryCategory parse_category(std::string_view text);

struct RewardBreakdown {
  double correctness = 0.0;
  double format_bonus = 0.0;
  double step_penalty = 0.0;
  double length_penalty = 0.0;
  double total = 0.0;
  TelemetryCategory category = TelemetryCategory::ExtractionFailure;
};

inline constexpr double kCountingMin = -0.4;
inline constexpr double kCountingMax = 1.1;
inline constexpr double kGraphMin = -0.2;
inline constexpr double kGraphMax = 1.1;
inline constexpr std::size_t kDefaultLengthThreshold = 8192;

/// Well-formatted means the family's preferred format: the canonical answer
/// line for counting, a JSON object or fenced JSON block otherwise.
bool well_formatted(const parsing::ParsedAnswer& parsed, TaskFamily family) noexcept;

TelemetryCategory categorize(const parsing::ParsedAnswer& parsed, bool correct, TaskFamily family) noexcept;

RewardBreakdown reward_counting(const parsing::ParsedAnswer& parsed, bool correct);

/// `completion_length` in characters; anything longer than
/// `length_threshold` scores -0.2 regardless of correctness.
RewardBreakdown reward_graph(const parsing::ParsedAnswer& parsed, graph::Verdict verdict, std::size_t completion_length,
                             std::size_t length_threshold = kDefaultLengthThreshold);

RewardBreakdown reward_spatial(const parsing::ParsedAnswer& parsed, bool correct);

}  // namespace rlvr::rewards
