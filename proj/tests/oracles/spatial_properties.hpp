#pragma once

// Metamorphic checks on spatial problems. Each returns an empty string when
// the property holds and a description of the violation otherwise.

#include <string>

#include "rlvr/dataset.hpp"
#include "rlvr/rng.hpp"
#include "rlvr/spatial.hpp"
#include "spatial_oracle.hpp"

namespace oracle {

using rlvr::spatial::SpatialProblem;

inline bool same_answer(const rlvr::GroundTruth& a, const rlvr::GroundTruth& b) {
  const auto* ca = std::get_if<rlvr::Coordinate>(&a);
  const auto* cb = std::get_if<rlvr::Coordinate>(&b);
  if (ca && cb) {
    return rlvr::round_scaled(ca->x, 3) == rlvr::round_scaled(cb->x, 3) &&
           rlvr::round_scaled(ca->y, 3) == rlvr::round_scaled(cb->y, 3);
  }
  return a == b;
}

inline bool is_relative(const SpatialProblem& p) {
  return p.query.kind == rlvr::QueryKind::RelativeLocation || p.query.kind == rlvr::QueryKind::RelativeOrientation;
}

/// A board translation inserted anywhere leaves relative answers unchanged.
inline std::string check_translation_invariance(const SpatialProblem& p, rlvr::Rng& rng) {
  if (!is_relative(p)) return {};
  auto q = p;
  const auto at = static_cast<std::ptrdiff_t>(rng.index(q.actions.size() + 1));
  q.actions.insert(q.actions.begin() + at,
                   rlvr::spatial::BoardTranslate{static_cast<int>(rng.uniform_int(-10, 10)),
                                                 static_cast<int>(rng.uniform_int(-10, 10))});
  return same_answer(rlvr::spatial::simulate(p), rlvr::spatial::simulate(q)) ? "" : "translation changed a relative answer";
}

/// Moving a particle k forward then k backward is the identity.
inline std::string check_move_inverse(const SpatialProblem& p, rlvr::Rng& rng) {
  auto q = p;
  const auto& id = p.particles[rng.index(p.particles.size())].id;
  const int k = static_cast<int>(rng.uniform_int(1, rlvr::spatial::kMaxSteps));
  const auto at = static_cast<std::ptrdiff_t>(rng.index(q.actions.size() + 1));
  const std::vector<rlvr::spatial::Action> pair = {
      rlvr::spatial::ParticleMove{id, rlvr::spatial::MoveDirection::Forward, k},
      rlvr::spatial::ParticleMove{id, rlvr::spatial::MoveDirection::Backward, k}};
  q.actions.insert(q.actions.begin() + at, pair.begin(), pair.end());
  return same_answer(rlvr::spatial::simulate(p), rlvr::spatial::simulate(q)) ? "" : "forward/backward did not cancel";
}

/// Four quarter turns of the board (in any split) are the identity.
inline std::string check_full_turn(const SpatialProblem& p, rlvr::Rng& rng) {
  auto q = p;
  const int first = static_cast<int>(rng.uniform_int(1, 3));
  std::vector<rlvr::spatial::Action> turns = {rlvr::spatial::BoardRotate{first}, rlvr::spatial::BoardRotate{4 - first}};
  if (rng.bernoulli(0.5)) turns.assign(4, rlvr::spatial::BoardRotate{1});
  const auto at = static_cast<std::ptrdiff_t>(rng.index(q.actions.size() + 1));
  q.actions.insert(q.actions.begin() + at, turns.begin(), turns.end());
  return same_answer(rlvr::spatial::simulate(p), rlvr::spatial::simulate(q)) ? "" : "full board turn changed the answer";
}

/// Swapping a and b negates relative locations and mirrors orientations.
inline std::string check_antisymmetry(const SpatialProblem& p) {
  if (!is_relative(p)) return {};
  auto q = p;
  std::swap(q.query.a, q.query.b);
  const auto forward = rlvr::spatial::simulate(p);
  const auto backward = rlvr::spatial::simulate(q);
  if (const auto* c = std::get_if<rlvr::Coordinate>(&forward)) {
    const auto& d = std::get<rlvr::Coordinate>(backward);
    return c->x == -d.x && c->y == -d.y ? "" : "relative location is not antisymmetric";
  }
  const auto& a = std::get<rlvr::RelativeOrientation>(forward).token;
  const auto& b = std::get<rlvr::RelativeOrientation>(backward).token;
  const bool ok = (a == "same" && b == "same") || (a == "opposite" && b == "opposite") ||
                  (a == "left-of" && b == "right-of") || (a == "right-of" && b == "left-of");
  return ok ? "" : "relative orientation is not mirrored";
}

/// The library simulator and the matrix simulator agree.
inline std::string check_matrix_agreement(const SpatialProblem& p) {
  return same_answer(rlvr::spatial::simulate(p), simulate_with_matrices(p)) ? "" : "matrix simulator disagrees";
}

/// Every property on one problem; first violation or empty.
inline std::string check_all(const SpatialProblem& p, rlvr::Rng& rng) {
  for (auto result : {check_translation_invariance(p, rng), check_move_inverse(p, rng), check_full_turn(p, rng),
                      check_antisymmetry(p), check_matrix_agreement(p)}) {
    if (!result.empty()) return result + ": " + rlvr::to_json(rlvr::ProblemSpec{p}).dump();
  }
  return {};
}

}  // namespace oracle
