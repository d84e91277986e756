#pragma once

// Random completion text for reward fuzzing: correct and wrong answers in
// every supported format, reasoning of varying length, markup, noise,
// oversized and truncated outputs.

#include <string>

#include "rlvr/parsing.hpp"
#include "rlvr/rng.hpp"

namespace oracle {

inline std::string random_noise(rlvr::Rng& rng, std::size_t length) {
  static constexpr std::string_view alphabet = "abcdefghijklmnopqrstuvwxyz0123456789 {}[]():,.-\"\n*#`$\\";
  std::string out;
  for (std::size_t i = 0; i < length; ++i) out += alphabet[rng.index(alphabet.size())];
  return out;
}

inline std::string wrong_answer_text(const rlvr::GroundTruth& truth, rlvr::TaskFamily family, rlvr::Rng& rng) {
  using namespace rlvr;
  GroundTruth wrong = truth;
  std::visit(
      [&](auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, IntScalar>) {
          t.value += rng.uniform_int(1, 9);
        } else if constexpr (std::is_same_v<T, RealScalar>) {
          t.value += 1.25;
        } else if constexpr (std::is_same_v<T, VertexSet> || std::is_same_v<T, NodeSequence>) {
          if (!t.nodes.empty() && rng.bernoulli(0.5)) t.nodes.pop_back();
          else t.nodes.push_back(static_cast<int>(rng.uniform_int(0, 30)));
        } else if constexpr (std::is_same_v<T, EdgeSet>) {
          t.edges.push_back({0, static_cast<int>(rng.uniform_int(1, 30))});
        } else if constexpr (std::is_same_v<T, Partition>) {
          std::swap(t.first, t.second);
          if (!t.first.empty()) t.second.push_back(t.first.back()), t.first.pop_back();
        } else if constexpr (std::is_same_v<T, Coordinate>) {
          t.x += 0.5;
        } else if constexpr (std::is_same_v<T, Orientation>) {
          t.token = t.token == "East" ? "West" : "East";
        } else {
          t.token = t.token == "same" ? "opposite" : "same";
        }
      },
      wrong);
  return parsing::render_answer(wrong, family);
}

/// One fuzzed completion for a problem with the given truth.
inline rlvr::parsing::Completion fuzz_completion(const rlvr::GroundTruth& truth, rlvr::TaskFamily family,
                                                 rlvr::Rng& rng) {
  using namespace rlvr;
  parsing::Completion c;
  const bool right = rng.bernoulli(0.5);
  std::string answer = right ? parsing::render_answer(truth, family) : wrong_answer_text(truth, family, rng);
  if (family == TaskFamily::Counting) {
    const auto bare = answer.substr(answer.find(':') + 2);
    switch (rng.uniform_int(0, 4)) {
      case 0: break;
      case 1: answer = "The answer is " + bare + "."; break;
      case 2: answer = "\\boxed{" + bare + "}"; break;
      case 3: answer = bare; break;
      default: answer = "I believe it is " + bare + " or so"; break;
    }
  } else {
    const auto payload = answer;
    switch (rng.uniform_int(0, 4)) {
      case 0: break;
      case 1: answer = "```json\n" + payload + "\n```"; break;
      case 2: answer = payload.substr(payload.find(':') + 2, payload.size() - payload.find(':') - 3); break;
      case 3: answer = "My answer: " + payload.substr(0, payload.size() / 2); break;
      default: answer = "The " + random_noise(rng, 12); break;
    }
  }
  std::string reasoning;
  const int lines = static_cast<int>(rng.uniform_int(0, 12));
  for (int i = 0; i < lines; ++i) {
    reasoning += rng.bernoulli(0.3) ? std::to_string(i + 1) + ". " : "";
    reasoning += random_noise(rng, rng.index(40)) + "\n";
  }
  switch (rng.uniform_int(0, 9)) {
    case 0: c.text = random_noise(rng, rng.index(200)); break;
    case 1: c.text = reasoning + answer + std::string(9000, 'x'); break;
    case 2: c.text = reasoning + answer + "\n" + random_noise(rng, 30); break;
    default: c.text = reasoning + answer; break;
  }
  c.truncated = rng.bernoulli(0.05);
  return c;
}

}  // namespace oracle
