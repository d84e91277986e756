#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rlvr/core.hpp"

namespace rlvr {

struct ProblemInstance;

namespace counting {

enum class StepKind {
  // filters
  KeepEven,
  KeepOdd,
  KeepPositive,
  KeepNegative,
  KeepDivisibleBy,  // param n
  KeepBelow,        // param t, strict
  KeepAbove,        // param t, strict
  // transforms
  AddConstant,       // param k
  MultiplyConstant,  // param k != 0
  Negate,
  Square,
  AbsoluteValue,
  ModuloConstant,  // param m >= 2, result in [0, m)
};

struct PipelineStep {
  StepKind kind = StepKind::KeepEven;
  std::int64_t param = 0;

  bool is_filter() const noexcept { return kind <= StepKind::KeepAbove; }
  friend bool operator==(const PipelineStep&, const PipelineStep&) = default;
};

enum class AggregateKind {
  Count,
  UniqueCount,
  ZeroCount,
  EvenCount,
  OddCount,
  PositiveCount,
  NegativeCount,
  DivisibleByNCount,    // param n
  BelowThresholdCount,  // param t
  AboveThresholdCount,  // param t
  Sum,
  Product,
  Mean,
  Median,
  Mode,
  Min,
  Max,
  Range,
  BitwiseAnd,
  BitwiseOr,
  BitwiseXor,
  BitwiseNand,
};

inline constexpr int kAggregateKindCount = 22;

struct AggregateOp {
  AggregateKind kind = AggregateKind::Count;
  std::int64_t param = 0;

  bool is_bitwise() const noexcept { return kind >= AggregateKind::BitwiseAnd; }
  bool has_param() const noexcept {
    return kind == AggregateKind::DivisibleByNCount || kind == AggregateKind::BelowThresholdCount ||
           kind == AggregateKind::AboveThresholdCount;
  }
  friend bool operator==(const AggregateOp&, const AggregateOp&) = default;
};

struct CountingSpec {
  std::int64_t range_lo = 1;
  std::int64_t range_hi = 1;  // inclusive
  std::vector<PipelineStep> pipeline;
  AggregateOp final_op;

  int n_filters() const noexcept;
  int n_transforms() const noexcept;
  friend bool operator==(const CountingSpec&, const CountingSpec&) = default;
};

std::string_view to_string(StepKind kind) noexcept;
StepKind parse_step_kind(std::string_view text);
bool step_has_param(StepKind kind) noexcept;
std::string_view to_string(AggregateKind kind) noexcept;
AggregateKind parse_aggregate_kind(std::string_view text);

/// Raised when evaluation overflows the 62-bit magnitude limit or the final
/// multiset is empty.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Magnitude limit for every intermediate and final value.
inline constexpr std::int64_t kMagnitudeLimit = std::int64_t{1} << 62;

/// Check the structural invariants (range order, 1-4 filters, 0-3 transforms,
/// constant ranges). Throws DataError naming the violation.
void validate(const CountingSpec& spec);

/// Apply the pipeline to the inclusive range, left to right.
std::vector<std::int64_t> run_pipeline(const CountingSpec& spec);

/// Apply `op` to a final-stage multiset.
GroundTruth aggregate(const AggregateOp& op, const std::vector<std::int64_t>& values);

/// Ground truth of a spec. Throws EvaluationError on empty final multiset,
/// overflow, or negative input to a bitwise operator.
GroundTruth evaluate_counting(const CountingSpec& spec);

/// Fixed template rendering of the prompt.
std::string render_counting_prompt(const CountingSpec& spec);

/// Operator whitelist entry: kind only, constants drawn by the generator.
struct CountingConfig {
  std::size_t count = 1;
  int min_range_scale = 1;  // 1 small (10..100), 2 medium (100..1000), 3 large (1000..10000)
  int max_range_scale = 3;
  int min_filters = 1;
  int max_filters = 4;
  int min_transforms = 0;
  int max_transforms = 3;
  std::vector<AggregateKind> operator_whitelist;  // empty means "all"
  std::uint64_t seed = 0;
  std::size_t attempts_per_instance = 10'000;
  /// When set, every instance is built from this spec (count must be <= 1).
  std::optional<CountingSpec> pinned;
};

/// All 22 aggregate kinds in declaration order.
std::vector<AggregateKind> all_aggregate_kinds();

/// Build a complete instance (prompt, truth, complexity) from a spec.
ProblemInstance make_counting_instance(const CountingSpec& spec, std::uint64_t seed, std::size_t ordinal);

std::vector<ProblemInstance> generate_counting(const CountingConfig& config);

/// Range-scale class of an inclusive range width (1, 2 or 3).
int range_scale_of(std::int64_t width) noexcept;

}  // namespace counting
}  // namespace rlvr
