#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace steer {

/// Named random streams. Every stochastic choice in the system draws from a
/// stream derived from (seed, stream, index) so results do not depend on the
/// order in which independent work items run.
enum class Stream : std::uint64_t {
  HoldoutSplit = 1,
  TreeBootstrap = 2,  // index = tree number; also drives per-split feature subsets
  Oversampling = 3,
  ExplainSample = 4,
  ExplainBackground = 5,
};

/// SplitMix64 (Steele, Lea, Flood 2014). Small, fully specified, and
/// identical on every platform, unlike the std:: distributions.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, bound) by rejection on the multiply-shift map.
  std::uint64_t uniform_index(std::uint64_t bound) noexcept;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform_real() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  static SplitMix64 derive(std::uint64_t seed, Stream stream, std::uint64_t index = 0) noexcept;

 private:
  std::uint64_t state_;
};

/// Fisher-Yates shuffle driven by `rng`.
template <typename T>
void shuffle(std::span<T> items, SplitMix64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_index(i));
    std::swap(items[i - 1], items[j]);
  }
}

/// `k` distinct indices from [0, n) (partial Fisher-Yates), returned in draw order.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, SplitMix64& rng);

}  // namespace steer
