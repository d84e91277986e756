#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

namespace rlvr {

/// SplitMix64 step. Used to expand a 64-bit seed into generator state and to
/// derive independent sub-seeds from labels.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// xoshiro256** seeded through SplitMix64.
///
/// Every derived draw (integer ranges, reals, shuffles) is implemented here
/// with fixed arithmetic so streams are identical on every platform; the
/// standard library distributions are deliberately not used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform integer in [lo, hi] (inclusive), unbiased by rejection.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept {
    if (hi <= lo) return lo;
    const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next_u64());
    const std::uint64_t threshold = (0 - span) % span;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + r % span);
    }
  }

  /// Uniform index in [0, n). n must be positive.
  std::size_t index(std::size_t n) noexcept {
    return static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(n) - 1));
  }

  /// Uniform real in [0, 1) with 53 bits of precision.
  double uniform01() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform_real(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) noexcept { return uniform01() < p; }

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::span<T> items) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = index(i);
      std::swap(items[i - 1], items[j]);
    }
  }

  template <typename Container>
  auto& pick(const Container& c) noexcept {
    return c[index(c.size())];
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

  std::array<std::uint64_t, 4> state_{};
};

/// Derive a sub-seed from a base seed and a label (FNV-1a over the label,
/// then mixed with SplitMix64).
std::uint64_t derive_seed(std::uint64_t base, std::string_view label) noexcept;

}  // namespace rlvr
