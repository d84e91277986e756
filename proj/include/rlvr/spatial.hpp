#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rlvr/core.hpp"

namespace rlvr {

struct ProblemInstance;

namespace spatial {

/// Counter-clockwise order; value = number of quarter turns from East.
enum class Cardinal { East = 0, North = 1, West = 2, South = 3 };

std::string_view to_string(Cardinal c) noexcept;
Cardinal parse_cardinal(std::string_view text);
/// Rotate counter-clockwise by `quarter_turns` (may be negative).
Cardinal rotate(Cardinal c, int quarter_turns) noexcept;

/// Exact coordinate stored in half units: value = halves / 2.
struct HalfPoint {
  std::int64_t x2 = 0;
  std::int64_t y2 = 0;
  friend bool operator==(const HalfPoint&, const HalfPoint&) = default;
};

struct Board {
  int size = 20;
  HalfPoint center;
  Cardinal orientation = Cardinal::North;
  friend bool operator==(const Board&, const Board&) = default;
};

struct Particle {
  std::string id;
  HalfPoint position;
  Cardinal orientation = Cardinal::East;
  friend bool operator==(const Particle&, const Particle&) = default;
};

enum class MoveDirection { Forward, Backward };
enum class Turn { Left, Right, Around };

struct ParticleMove {
  std::string id;
  MoveDirection direction = MoveDirection::Forward;
  int steps = 1;
  friend bool operator==(const ParticleMove&, const ParticleMove&) = default;
};

struct ParticleTurn {
  std::string id;
  Turn turn = Turn::Left;
  friend bool operator==(const ParticleTurn&, const ParticleTurn&) = default;
};

struct BoardTranslate {
  int dx = 0;
  int dy = 0;
  friend bool operator==(const BoardTranslate&, const BoardTranslate&) = default;
};

struct BoardRotate {
  int quarter_turns = 1;  // counter-clockwise, 1..3
  friend bool operator==(const BoardRotate&, const BoardRotate&) = default;
};

using Action = std::variant<ParticleMove, ParticleTurn, BoardTranslate, BoardRotate>;

struct Query {
  QueryKind kind = QueryKind::AbsoluteLocation;
  std::string a;
  std::string b;  // relative queries only
  friend bool operator==(const Query&, const Query&) = default;
};

struct SpatialProblem {
  Board board;
  std::vector<Particle> particles;
  std::vector<Action> actions;
  Query query;
  friend bool operator==(const SpatialProblem&, const SpatialProblem&) = default;
};

inline constexpr int kMaxSteps = 10;

/// Throws DataError when an invariant is violated.
void validate(const SpatialProblem& problem);

/// Board and particles after every action has been applied.
struct SpatialState {
  Board board;
  std::vector<Particle> particles;
};

SpatialState apply_actions(const SpatialProblem& problem);

/// Answer the query on the final state.
GroundTruth simulate(const SpatialProblem& problem);

std::string_view relative_orientation_token(Cardinal a, Cardinal b) noexcept;

std::string render_spatial_prompt(const SpatialProblem& problem);

struct QueryMix {
  double absolute_location = 1.0;
  double absolute_orientation = 1.0;
  double relative_location = 1.0;
  double relative_orientation = 1.0;
};

struct SpatialConfig {
  std::size_t count = 1;
  int min_actions = 1;
  int max_actions = 10;
  int min_particles = 2;
  int max_particles = 4;
  QueryMix query_mix;
  std::uint64_t seed = 0;
  std::size_t attempts_per_instance = 10'000;
  std::optional<SpatialProblem> pinned;
};

ProblemInstance make_spatial_instance(const SpatialProblem& problem, std::uint64_t seed, std::size_t ordinal);

std::vector<ProblemInstance> generate_spatial(const SpatialConfig& config);

}  // namespace spatial
}  // namespace rlvr
