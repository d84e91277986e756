#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "rlvr/problem.hpp"

namespace rlvr::parsing {

enum class ParseStatus { Extracted, ExtractionFailed, Truncated };
enum class FormatClass { CanonicalAnswerLine, AcceptableVariant, JsonObject, JsonCodeBlock, BareValue, Invalid };

std::string_view to_string(ParseStatus status) noexcept;
std::string_view to_string(FormatClass format) noexcept;
FormatClass parse_format_class(std::string_view text);

struct Completion {
  std::string text;
  bool truncated = false;  // generation hit its token limit
  std::string model_id;
  std::string problem_id;
};

struct ParsedAnswer {
  ParseStatus status = ParseStatus::ExtractionFailed;
  std::optional<GroundTruth> value;  // present iff status == Extracted
  FormatClass format_class = FormatClass::Invalid;
  int step_count = 0;
  bool via_normalizer = false;
};

/// Answer schema a JSON answer is decoded against.
enum class ExpectedShape {
  Integer,
  Real,
  VertexSet,
  EdgeSet,
  NodeSequence,
  Partition,
  Coordinate,
  Orientation,
  RelativeOrientation,
};

std::string_view to_string(ExpectedShape shape) noexcept;

/// Shape of the answer a problem expects (counting answers are numbers).
ExpectedShape expected_shape_of(const ProblemSpec& spec);

/// `Answer: N` line, then the documented variants, then a trailing bare
/// number. Never throws.
ParsedAnswer parse_counting(const Completion& completion);

/// Fenced JSON block, then the last JSON object, then a bare trailing value.
/// Never throws.
ParsedAnswer parse_json_answer(const Completion& completion, ExpectedShape shape);

/// Dispatch on the problem family.
ParsedAnswer parse_for(const ProblemInstance& problem, const Completion& completion);

/// Number of reasoning steps in `text`: the larger of non-empty lines and
/// enumerated items ("1.", "2)").
int count_steps(std::string_view text);

/// Strict number literal: optional sign, digits (thousands commas allowed),
/// optional fraction. Integers become IntScalar, decimals RealScalar.
std::optional<GroundTruth> parse_number(std::string_view text);

/// Decode an already parsed JSON payload against `shape`.
std::optional<GroundTruth> decode_payload(const std::string& json_text, ExpectedShape shape);

/// Compare an extracted value with the truth: numbers at 3 decimals (exact
/// for integer pairs), tokens exactly, sets as sets, sequences in order
/// (or reversed when `allow_reversal`). Throws PreconditionError unless
/// parsed.status is Extracted.
bool match_value(const ParsedAnswer& parsed, const GroundTruth& truth, bool allow_reversal = false);

// ---------------------------------------------------------------------------
// Normalizer fallback
// ---------------------------------------------------------------------------

/// The normalizer could not be reached or answered with garbage.
class NormalizerUnavailable : public Error {
 public:
  using Error::Error;
};

/// External model that rewrites a free-form completion into canonical JSON.
class Normalizer {
 public:
  virtual ~Normalizer() = default;
  /// Returns canonical text (normally `{"answer": ...}`); throws
  /// NormalizerUnavailable on transport failure.
  virtual std::string canonicalize(const ProblemInstance& problem, const std::string& completion) = 0;
};

/// Offline stand-in: pulls the numbers (or heading word) out of the last
/// line that has any and wraps them in the expected JSON shape.
class StubNormalizer : public Normalizer {
 public:
  std::string canonicalize(const ProblemInstance& problem, const std::string& completion) override;
};

/// Re-parse a failed graph or spatial completion through `normalizer`.
/// Throws PreconditionError when `primary` is not ExtractionFailed or the
/// problem is a counting problem; propagates NormalizerUnavailable.
ParsedAnswer normalize_with_fallback(const Completion& completion, const ParsedAnswer& primary,
                                     const ProblemInstance& problem, Normalizer& normalizer);

/// Canonical well-formatted answer text for a truth value.
std::string render_answer(const GroundTruth& truth, TaskFamily family);

}  // namespace rlvr::parsing
