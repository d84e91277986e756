#include "rlvr/spatial.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_set>

#include "rlvr/problem.hpp"
#include "rlvr/rng.hpp"

namespace rlvr::spatial {

namespace {

constexpr std::string_view kCardinalNames[] = {"East", "North", "West", "South"};
constexpr std::int64_t kMaxShift = 10;

HalfPoint unit(Cardinal c) {
  switch (c) {
    case Cardinal::East: return {2, 0};
    case Cardinal::North: return {0, 2};
    case Cardinal::West: return {-2, 0};
    case Cardinal::South: return {0, -2};
  }
  return {};
}

HalfPoint rotate_about(HalfPoint p, HalfPoint c, int quarter_turns) {
  std::int64_t dx = p.x2 - c.x2;
  std::int64_t dy = p.y2 - c.y2;
  for (int i = 0; i < ((quarter_turns % 4) + 4) % 4; ++i) {
    const std::int64_t t = dx;
    dx = -dy;
    dy = t;
  }
  return {c.x2 + dx, c.y2 + dy};
}

const Particle* find(const std::vector<Particle>& particles, const std::string& id) {
  for (const auto& p : particles)
    if (p.id == id) return &p;
  return nullptr;
}

std::string half_text(std::int64_t halves) {
  const std::int64_t mag = halves < 0 ? -halves : halves;
  return std::string(halves < 0 ? "-" : "") + std::to_string(mag / 2) + (mag % 2 ? ".5" : ".0");
}

std::string point_text(HalfPoint p) { return "(" + half_text(p.x2) + ", " + half_text(p.y2) + ")"; }

/// "a", "a and b", "a, b and c".
std::string join_words(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += (i + 1 == items.size()) ? " and " : ", ";
    out += items[i];
  }
  return out;
}

std::string count_word(std::size_t n) {
  static constexpr std::string_view kWords[] = {"zero", "one", "two", "three", "four", "five", "six"};
  return n < std::size(kWords) ? std::string(kWords[n]) : std::to_string(n);
}

}  // namespace

std::string_view to_string(Cardinal c) noexcept { return kCardinalNames[static_cast<int>(c)]; }

Cardinal parse_cardinal(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (lower == "east") return Cardinal::East;
  if (lower == "north") return Cardinal::North;
  if (lower == "west") return Cardinal::West;
  if (lower == "south") return Cardinal::South;
  throw DataError("unknown cardinal direction '" + std::string(text) + "'");
}

Cardinal rotate(Cardinal c, int quarter_turns) noexcept {
  return static_cast<Cardinal>(((static_cast<int>(c) + quarter_turns) % 4 + 4) % 4);
}

std::string_view relative_orientation_token(Cardinal a, Cardinal b) noexcept {
  switch (((static_cast<int>(a) - static_cast<int>(b)) % 4 + 4) % 4) {
    case 0: return "same";
    case 1: return "left-of";
    case 2: return "opposite";
    default: return "right-of";
  }
}

void validate(const SpatialProblem& problem) {
  const auto& board = problem.board;
  if (board.size <= 0 || board.size % 2 != 0) throw DataError("board size must be a positive even integer");
  if (problem.particles.size() < 2 || problem.particles.size() > 4) throw DataError("spatial problems have 2-4 particles");
  std::set<std::string> ids;
  const std::int64_t half_extent2 = board.size;  // size/2 in half units
  for (const auto& p : problem.particles) {
    if (p.id.empty()) throw DataError("particle id must not be empty");
    if (!ids.insert(p.id).second) throw DataError("duplicate particle id '" + p.id + "'");
    if (std::abs(p.position.x2 - board.center.x2) > half_extent2 ||
        std::abs(p.position.y2 - board.center.y2) > half_extent2) {
      throw DataError("particle " + p.id + " starts outside the board");
    }
  }
  if (problem.actions.empty()) throw DataError("spatial problems need at least one action");
  for (const auto& action : problem.actions) {
    std::visit(
        [&](const auto& a) {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, ParticleMove>) {
            if (!ids.count(a.id)) throw DataError("action references unknown particle '" + a.id + "'");
            if (a.steps < 1 || a.steps > kMaxSteps) throw DataError("move steps must lie in 1..10");
          } else if constexpr (std::is_same_v<T, ParticleTurn>) {
            if (!ids.count(a.id)) throw DataError("action references unknown particle '" + a.id + "'");
          } else if constexpr (std::is_same_v<T, BoardTranslate>) {
            if (std::abs(a.dx) > kMaxShift || std::abs(a.dy) > kMaxShift) throw DataError("board shift must lie in -10..10");
          } else {
            if (a.quarter_turns < 1 || a.quarter_turns > 3) throw DataError("board rotation must be 1..3 quarter turns");
          }
        },
        action);
  }
  const auto& q = problem.query;
  if (!ids.count(q.a)) throw DataError("query references unknown particle '" + q.a + "'");
  const bool relative = q.kind == QueryKind::RelativeLocation || q.kind == QueryKind::RelativeOrientation;
  if (relative) {
    if (!ids.count(q.b)) throw DataError("query references unknown particle '" + q.b + "'");
    if (q.a == q.b) throw DataError("relative queries need two different particles");
  } else if (!q.b.empty()) {
    throw DataError("absolute queries reference a single particle");
  }
}

SpatialState apply_actions(const SpatialProblem& problem) {
  SpatialState state{problem.board, problem.particles};
  auto particle = [&](const std::string& id) -> Particle& {
    for (auto& p : state.particles)
      if (p.id == id) return p;
    throw DataError("unknown particle '" + id + "'");
  };
  for (const auto& action : problem.actions) {
    std::visit(
        [&](const auto& a) {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, ParticleMove>) {
            auto& p = particle(a.id);
            const HalfPoint u = unit(p.orientation);
            const std::int64_t sign = a.direction == MoveDirection::Forward ? 1 : -1;
            p.position.x2 += sign * a.steps * u.x2;
            p.position.y2 += sign * a.steps * u.y2;
          } else if constexpr (std::is_same_v<T, ParticleTurn>) {
            auto& p = particle(a.id);
            p.orientation = rotate(p.orientation, a.turn == Turn::Left ? 1 : a.turn == Turn::Right ? -1 : 2);
          } else if constexpr (std::is_same_v<T, BoardTranslate>) {
            state.board.center.x2 += 2 * a.dx;
            state.board.center.y2 += 2 * a.dy;
            for (auto& p : state.particles) {
              p.position.x2 += 2 * a.dx;
              p.position.y2 += 2 * a.dy;
            }
          } else {
            state.board.orientation = rotate(state.board.orientation, a.quarter_turns);
            for (auto& p : state.particles) {
              p.position = rotate_about(p.position, state.board.center, a.quarter_turns);
              p.orientation = rotate(p.orientation, a.quarter_turns);
            }
          }
        },
        action);
  }
  return state;
}

GroundTruth simulate(const SpatialProblem& problem) {
  validate(problem);
  const SpatialState state = apply_actions(problem);
  const Particle& a = *find(state.particles, problem.query.a);
  switch (problem.query.kind) {
    case QueryKind::AbsoluteLocation:
      return Coordinate{static_cast<double>(a.position.x2) / 2.0, static_cast<double>(a.position.y2) / 2.0};
    case QueryKind::AbsoluteOrientation:
      return Orientation{std::string(to_string(a.orientation))};
    case QueryKind::RelativeLocation: {
      const Particle& b = *find(state.particles, problem.query.b);
      return Coordinate{static_cast<double>(a.position.x2 - b.position.x2) / 2.0,
                        static_cast<double>(a.position.y2 - b.position.y2) / 2.0};
    }
    case QueryKind::RelativeOrientation: {
      const Particle& b = *find(state.particles, problem.query.b);
      return RelativeOrientation{std::string(relative_orientation_token(a.orientation, b.orientation))};
    }
  }
  return Coordinate{};
}

std::string render_spatial_prompt(const SpatialProblem& problem) {
  const auto& board = problem.board;
  const auto& ps = problem.particles;
  std::vector<std::string> names, places, facings;
  for (const auto& p : ps) {
    names.push_back(p.id);
    places.push_back(point_text(p.position));
    facings.push_back(std::string(to_string(p.orientation)));
  }
  std::string text = "Consider a square grid of size " + std::to_string(board.size) + "x" + std::to_string(board.size) +
                     " centered at " + point_text(board.center) + " and oriented towards " +
                     std::string(to_string(board.orientation)) + ". It has " + count_word(ps.size()) + " particles " +
                     join_words(names) + " at locations " + join_words(places) + ", respectively. " + join_words(names) +
                     " face towards " + join_words(facings) + ", respectively.";
  for (const auto& action : problem.actions) {
    text += " ";
    std::visit(
        [&](const auto& a) {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, ParticleMove>) {
            text += a.id + " moves " + std::to_string(a.steps) + (a.steps == 1 ? " step " : " steps ") +
                    (a.direction == MoveDirection::Forward ? "forward." : "backwards.");
          } else if constexpr (std::is_same_v<T, ParticleTurn>) {
            text += a.id + (a.turn == Turn::Left ? " turns left." : a.turn == Turn::Right ? " turns right." : " turns around.");
          } else if constexpr (std::is_same_v<T, BoardTranslate>) {
            text += "The board, with all particles on it, shifts by (" + std::to_string(a.dx) + ", " +
                    std::to_string(a.dy) + ").";
          } else {
            text += "The board, with all particles on it, rotates " + std::to_string(90 * a.quarter_turns) +
                    " degrees counterclockwise around its center.";
          }
        },
        action);
  }
  const auto& q = problem.query;
  switch (q.kind) {
    case QueryKind::AbsoluteLocation: text += " What is the location of " + q.a + "?"; break;
    case QueryKind::AbsoluteOrientation: text += " What is the orientation of " + q.a + "?"; break;
    case QueryKind::RelativeLocation: text += " What is the location of " + q.a + ", relative to " + q.b + "?"; break;
    case QueryKind::RelativeOrientation:
      text += " What is the orientation of " + q.a + ", relative to " + q.b + "?";
      break;
  }
  text +=
      "\nCoordinates are (x, y) with x increasing towards East and y increasing towards North. Turning left is a "
      "90 degree counterclockwise turn.";
  switch (q.kind) {
    case QueryKind::AbsoluteLocation:
      text += "\nProvide your final answer as a JSON object of the form {\"answer\": {\"x\": 1.5, \"y\": -2.0}}.";
      break;
    case QueryKind::RelativeLocation:
      text += " The location of " + q.a + " relative to " + q.b + " is the location of " + q.a + " minus the location of " +
              q.b + ".\nProvide your final answer as a JSON object of the form {\"answer\": {\"x\": 1.5, \"y\": -2.0}}.";
      break;
    case QueryKind::AbsoluteOrientation:
      text += "\nProvide your final answer as a JSON object of the form {\"answer\": \"North\"}, using one of East, "
              "North, West, South.";
      break;
    case QueryKind::RelativeOrientation:
      text += " Answer with one of: same (both face the same way), left-of (" + q.a + " faces 90 degrees "
              "counterclockwise from " + q.b + "), opposite, right-of (" + q.a + " faces 90 degrees clockwise from " +
              q.b + ").\nProvide your final answer as a JSON object of the form {\"answer\": \"left-of\"}.";
      break;
  }
  return text;
}

ProblemInstance make_spatial_instance(const SpatialProblem& problem, std::uint64_t seed, std::size_t ordinal) {
  ProblemInstance instance;
  instance.id = make_instance_id(TaskFamily::Spatial, seed, ordinal);
  instance.family = TaskFamily::Spatial;
  instance.truth = simulate(problem);
  instance.prompt = render_spatial_prompt(problem);
  instance.spec = problem;
  instance.complexity = complexity_of(instance.spec);
  instance.seed = seed;
  return instance;
}

namespace {

std::string problem_key(const SpatialProblem& p) {
  std::string key = std::to_string(static_cast<int>(p.board.orientation));
  for (const auto& q : p.particles) {
    key += "|" + q.id + ":" + std::to_string(q.position.x2) + "," + std::to_string(q.position.y2) + "," +
           std::to_string(static_cast<int>(q.orientation));
  }
  for (const auto& action : p.actions) {
    std::visit(
        [&](const auto& a) {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, ParticleMove>) {
            key += "/m" + a.id + std::to_string(static_cast<int>(a.direction)) + std::to_string(a.steps);
          } else if constexpr (std::is_same_v<T, ParticleTurn>) {
            key += "/t" + a.id + std::to_string(static_cast<int>(a.turn));
          } else if constexpr (std::is_same_v<T, BoardTranslate>) {
            key += "/s" + std::to_string(a.dx) + "," + std::to_string(a.dy);
          } else {
            key += "/r" + std::to_string(a.quarter_turns);
          }
        },
        action);
  }
  return key + "?" + std::to_string(static_cast<int>(p.query.kind)) + p.query.a + "," + p.query.b;
}

QueryKind draw_query_kind(Rng& rng, const QueryMix& mix) {
  const double weights[] = {mix.absolute_location, mix.absolute_orientation, mix.relative_location,
                            mix.relative_orientation};
  const double total = weights[0] + weights[1] + weights[2] + weights[3];
  double u = rng.uniform01() * total;
  for (int i = 0; i < 4; ++i) {
    if (weights[i] <= 0) continue;
    if (u < weights[i]) return static_cast<QueryKind>(i);
    u -= weights[i];
  }
  for (int i = 3; i >= 0; --i)
    if (weights[i] > 0) return static_cast<QueryKind>(i);
  return QueryKind::AbsoluteLocation;
}

SpatialProblem draw_problem(Rng& rng, const SpatialConfig& config) {
  SpatialProblem p;
  const auto n = static_cast<int>(rng.uniform_int(config.min_particles, config.max_particles));
  const std::int64_t half = p.board.size / 2;
  for (int i = 0; i < n; ++i) {
    Particle particle;
    particle.id = "P" + std::to_string(i + 1);
    particle.position = {2 * rng.uniform_int(-half, half - 1) + 1, 2 * rng.uniform_int(-half, half - 1) + 1};
    particle.orientation = static_cast<Cardinal>(rng.index(4));
    p.particles.push_back(particle);
  }
  const auto n_actions = rng.uniform_int(config.min_actions, config.max_actions);
  auto any_id = [&]() { return p.particles[rng.index(p.particles.size())].id; };
  for (std::int64_t i = 0; i < n_actions; ++i) {
    const double u = rng.uniform01();
    if (u < 0.4) {
      p.actions.emplace_back(ParticleMove{any_id(), rng.bernoulli(0.5) ? MoveDirection::Forward : MoveDirection::Backward,
                                          static_cast<int>(rng.uniform_int(1, kMaxSteps))});
    } else if (u < 0.65) {
      p.actions.emplace_back(ParticleTurn{any_id(), static_cast<Turn>(rng.index(3))});
    } else if (u < 0.8) {
      p.actions.emplace_back(BoardTranslate{static_cast<int>(rng.uniform_int(-5, 5)), static_cast<int>(rng.uniform_int(-5, 5))});
    } else {
      p.actions.emplace_back(BoardRotate{static_cast<int>(rng.uniform_int(1, 3))});
    }
  }
  p.query.kind = draw_query_kind(rng, config.query_mix);
  const auto a = rng.index(p.particles.size());
  p.query.a = p.particles[a].id;
  if (p.query.kind == QueryKind::RelativeLocation || p.query.kind == QueryKind::RelativeOrientation) {
    auto b = rng.index(p.particles.size() - 1);
    if (b >= a) ++b;
    p.query.b = p.particles[b].id;
  }
  return p;
}

}  // namespace

std::vector<ProblemInstance> generate_spatial(const SpatialConfig& config) {
  if (config.min_actions < 1) throw ConfigError("spatial problems need at least one action");
  if (config.max_actions < config.min_actions) throw ConfigError("max_actions must be >= min_actions");
  if (config.min_particles < 2 || config.max_particles > 4 || config.min_particles > config.max_particles) {
    throw ConfigError("particle bounds must lie within [2, 4]");
  }
  const auto& mix = config.query_mix;
  if (mix.absolute_location < 0 || mix.absolute_orientation < 0 || mix.relative_location < 0 ||
      mix.relative_orientation < 0 ||
      mix.absolute_location + mix.absolute_orientation + mix.relative_location + mix.relative_orientation <= 0) {
    throw ConfigError("query mix weights must be non-negative with a positive sum");
  }
  std::vector<ProblemInstance> out;
  if (config.count == 0) return out;
  if (config.pinned) {
    if (config.count > 1) throw ConfigError("a pinned problem yields exactly one unique instance");
    out.push_back(make_spatial_instance(*config.pinned, config.seed, 0));
    return out;
  }
  Rng rng(config.seed);
  std::unordered_set<std::string> seen;
  for (std::size_t ordinal = 0; ordinal < config.count; ++ordinal) {
    bool produced = false;
    for (std::size_t attempt = 0; attempt < config.attempts_per_instance && !produced; ++attempt) {
      SpatialProblem p = draw_problem(rng, config);
      if (!seen.insert(problem_key(p)).second) continue;
      out.push_back(make_spatial_instance(p, config.seed, ordinal));
      produced = true;
    }
    if (!produced) {
      throw GenerationBudgetError("spatial generator exhausted its attempts for instance " + std::to_string(ordinal));
    }
  }
  return out;
}

}  // namespace rlvr::spatial
