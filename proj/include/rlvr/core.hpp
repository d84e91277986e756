#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace rlvr {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid generator / curation / CLI configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent data (dataset lines, records, manifests).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A caller broke an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The rejection-sampling budget of a generator ran out.
class GenerationBudgetError : public Error {
 public:
  using Error::Error;
};

/// File or network I/O failed.
class IoError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Families and tiers
// ---------------------------------------------------------------------------

enum class TaskFamily { Counting, Graph, Spatial };

std::string_view to_string(TaskFamily family) noexcept;
TaskFamily parse_task_family(std::string_view text);

enum class DifficultyTier { Easy, Medium, Hard };

std::string_view to_string(DifficultyTier tier) noexcept;
DifficultyTier parse_difficulty_tier(std::string_view text);

// ---------------------------------------------------------------------------
// Rational
// ---------------------------------------------------------------------------

/// Exact non-negative-denominator fraction, always stored reduced.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1);

  double to_double() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
    const __int128 lhs = static_cast<__int128>(a.num) * b.den;
    const __int128 rhs = static_cast<__int128>(b.num) * a.den;
    return lhs < rhs ? std::strong_ordering::less
                     : (lhs > rhs ? std::strong_ordering::greater : std::strong_ordering::equal);
  }
};

/// Round half away from zero to `places` decimals; returns the scaled integer
/// (e.g. round_scaled(-5.0004, 3) == -5000).
std::int64_t round_scaled(double value, int places) noexcept;

/// Exact rounding of num/den to `places` decimals, half away from zero,
/// returned as a scaled integer.
std::int64_t round_scaled(const Rational& value, int places) noexcept;

/// Fixed-point text with exactly `places` decimals ("-5.0", "12.25").
std::string format_fixed(double value, int places);

// ---------------------------------------------------------------------------
// Ground truth
// ---------------------------------------------------------------------------

struct IntScalar {
  std::int64_t value = 0;
  friend bool operator==(const IntScalar&, const IntScalar&) = default;
};

/// Real answer with the number of decimals it is rendered with.
struct RealScalar {
  double value = 0.0;
  int precision = 2;
  friend bool operator==(const RealScalar&, const RealScalar&) = default;
};

struct VertexSet {
  std::vector<int> nodes;  // sorted ascending
  friend bool operator==(const VertexSet&, const VertexSet&) = default;
};

struct EdgeSet {
  std::vector<std::pair<int, int>> edges;
  friend bool operator==(const EdgeSet&, const EdgeSet&) = default;
};

struct NodeSequence {
  std::vector<int> nodes;
  friend bool operator==(const NodeSequence&, const NodeSequence&) = default;
};

struct Partition {
  std::vector<int> first;
  std::vector<int> second;
  friend bool operator==(const Partition&, const Partition&) = default;
};

struct Coordinate {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Coordinate&, const Coordinate&) = default;
};

/// Absolute heading: "East", "North", "West" or "South".
struct Orientation {
  std::string token;
  friend bool operator==(const Orientation&, const Orientation&) = default;
};

/// Heading of one particle relative to another: "same", "left-of",
/// "opposite" or "right-of".
struct RelativeOrientation {
  std::string token;
  friend bool operator==(const RelativeOrientation&, const RelativeOrientation&) = default;
};

using GroundTruth = std::variant<IntScalar, RealScalar, VertexSet, EdgeSet, NodeSequence, Partition, Coordinate,
                                 Orientation, RelativeOrientation>;

/// Short kind tag used in JSON ("int", "real", "vertex_set", ...).
std::string_view truth_kind(const GroundTruth& truth) noexcept;

/// Human-readable rendering used in reports and error messages.
std::string describe(const GroundTruth& truth);

// ---------------------------------------------------------------------------
// Complexity metadata
// ---------------------------------------------------------------------------

enum class QueryKind { AbsoluteLocation, AbsoluteOrientation, RelativeLocation, RelativeOrientation };

std::string_view to_string(QueryKind kind) noexcept;
/// Two-letter abbreviation (AL, AO, RL, RO).
std::string_view abbreviation(QueryKind kind) noexcept;
QueryKind parse_query_kind(std::string_view text);

struct CountingComplexity {
  int range_scale = 1;  // 1 small, 2 medium, 3 large
  int n_filters = 1;
  int n_transforms = 0;
  int total_steps = 1;
  friend bool operator==(const CountingComplexity&, const CountingComplexity&) = default;
};

struct GraphComplexity {
  int n_nodes = 5;
  int n_edges = 0;
  bool directed = false;
  bool weighted = false;
  friend bool operator==(const GraphComplexity&, const GraphComplexity&) = default;
};

struct SpatialComplexity {
  int n_actions = 1;
  QueryKind query_kind = QueryKind::AbsoluteLocation;
  friend bool operator==(const SpatialComplexity&, const SpatialComplexity&) = default;
};

using ComplexityMeta = std::variant<CountingComplexity, GraphComplexity, SpatialComplexity>;

}  // namespace rlvr
