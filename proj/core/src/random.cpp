#include "steer/random.hpp"

#include <numeric>

namespace steer {

namespace {
__extension__ using u128 = unsigned __int128;
}  // namespace

std::uint64_t SplitMix64::uniform_index(std::uint64_t bound) noexcept {
  if (bound <= 1) return 0;
  // Lemire's nearly-divisionless method.
  u128 m = static_cast<u128>(next()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<u128>(next()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

SplitMix64 SplitMix64::derive(std::uint64_t seed, Stream stream, std::uint64_t index) noexcept {
  SplitMix64 mixer(seed);
  std::uint64_t state = mixer.next();
  SplitMix64 a(state ^ (static_cast<std::uint64_t>(stream) * 0xD1B54A32D192ED03ULL));
  state = a.next();
  SplitMix64 b(state ^ (index * 0x8CB92BA72F3D8DD7ULL));
  return SplitMix64(b.next());
}

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, SplitMix64& rng) {
  if (k > n) k = n;
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.uniform_index(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace steer
