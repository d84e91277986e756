#include "rlvr/core.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "rlvr/rng.hpp"

namespace rlvr {

std::uint64_t derive_seed(std::uint64_t base, std::string_view label) noexcept {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const char c : label) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  std::uint64_t state = base ^ hash;
  return splitmix64(state);
}

std::string_view to_string(TaskFamily family) noexcept {
  switch (family) {
    case TaskFamily::Counting: return "counting";
    case TaskFamily::Graph: return "graph";
    case TaskFamily::Spatial: return "spatial";
  }
  return "unknown";
}

TaskFamily parse_task_family(std::string_view text) {
  if (text == "counting") return TaskFamily::Counting;
  if (text == "graph") return TaskFamily::Graph;
  if (text == "spatial") return TaskFamily::Spatial;
  throw DataError("unknown task family '" + std::string(text) + "'");
}

std::string_view to_string(DifficultyTier tier) noexcept {
  switch (tier) {
    case DifficultyTier::Easy: return "easy";
    case DifficultyTier::Medium: return "medium";
    case DifficultyTier::Hard: return "hard";
  }
  return "unknown";
}

DifficultyTier parse_difficulty_tier(std::string_view text) {
  if (text == "easy") return DifficultyTier::Easy;
  if (text == "medium") return DifficultyTier::Medium;
  if (text == "hard") return DifficultyTier::Hard;
  throw DataError("unknown difficulty tier '" + std::string(text) + "'");
}

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
  if (den == 0) throw PreconditionError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

std::int64_t round_scaled(double value, int places) noexcept {
  const long double scaled = static_cast<long double>(value) * std::pow(10.0L, places);
  return static_cast<std::int64_t>(std::llroundl(scaled));
}

std::int64_t round_scaled(const Rational& value, int places) noexcept {
  __int128 scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  const __int128 n = static_cast<__int128>(value.num) * scale;
  const __int128 d = value.den;
  const __int128 magnitude = ((n < 0 ? -n : n) * 2 + d) / (2 * d);
  return static_cast<std::int64_t>(n < 0 ? -magnitude : magnitude);
}

std::string format_fixed(double value, int places) {
  const std::int64_t scaled = round_scaled(value, places);
  std::int64_t pow10 = 1;
  for (int i = 0; i < places; ++i) pow10 *= 10;
  const std::int64_t whole = (scaled < 0 ? -scaled : scaled) / pow10;
  const std::int64_t frac = (scaled < 0 ? -scaled : scaled) % pow10;
  std::string out = scaled < 0 ? "-" : "";
  out += std::to_string(whole);
  if (places > 0) {
    std::string digits = std::to_string(frac);
    out += '.';
    out += std::string(static_cast<std::size_t>(places) - digits.size(), '0');
    out += digits;
  }
  return out;
}

std::string_view truth_kind(const GroundTruth& truth) noexcept {
  static constexpr std::string_view kinds[] = {"int",       "real",       "vertex_set",  "edge_set",
                                               "node_sequence", "partition", "coordinate", "orientation",
                                               "relative_orientation"};
  return kinds[truth.index()];
}

namespace {

std::string join_ints(const std::vector<int>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(values[i]);
  }
  return out + "]";
}

}  // namespace

std::string describe(const GroundTruth& truth) {
  struct Visitor {
    std::string operator()(const IntScalar& v) const { return std::to_string(v.value); }
    std::string operator()(const RealScalar& v) const { return format_fixed(v.value, v.precision); }
    std::string operator()(const VertexSet& v) const { return join_ints(v.nodes); }
    std::string operator()(const NodeSequence& v) const { return join_ints(v.nodes); }
    std::string operator()(const EdgeSet& v) const {
      std::string out = "[";
      for (std::size_t i = 0; i < v.edges.size(); ++i) {
        if (i) out += ", ";
        out += "(" + std::to_string(v.edges[i].first) + "," + std::to_string(v.edges[i].second) + ")";
      }
      return out + "]";
    }
    std::string operator()(const Partition& v) const { return join_ints(v.first) + " | " + join_ints(v.second); }
    std::string operator()(const Coordinate& v) const {
      return "(" + format_fixed(v.x, 1) + ", " + format_fixed(v.y, 1) + ")";
    }
    std::string operator()(const Orientation& v) const { return v.token; }
    std::string operator()(const RelativeOrientation& v) const { return v.token; }
  };
  return std::visit(Visitor{}, truth);
}

std::string_view to_string(QueryKind kind) noexcept {
  switch (kind) {
    case QueryKind::AbsoluteLocation: return "absolute_location";
    case QueryKind::AbsoluteOrientation: return "absolute_orientation";
    case QueryKind::RelativeLocation: return "relative_location";
    case QueryKind::RelativeOrientation: return "relative_orientation";
  }
  return "unknown";
}

std::string_view abbreviation(QueryKind kind) noexcept {
  switch (kind) {
    case QueryKind::AbsoluteLocation: return "AL";
    case QueryKind::AbsoluteOrientation: return "AO";
    case QueryKind::RelativeLocation: return "RL";
    case QueryKind::RelativeOrientation: return "RO";
  }
  return "??";
}

QueryKind parse_query_kind(std::string_view text) {
  for (auto kind : {QueryKind::AbsoluteLocation, QueryKind::AbsoluteOrientation, QueryKind::RelativeLocation,
                    QueryKind::RelativeOrientation}) {
    if (text == to_string(kind) || text == abbreviation(kind)) return kind;
  }
  throw DataError("unknown query kind '" + std::string(text) + "'");
}

}  // namespace rlvr
