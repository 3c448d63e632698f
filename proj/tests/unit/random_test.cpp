#include <algorithm>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "steer/random.hpp"

using steer::SplitMix64;
using steer::Stream;

TEST(SplitMix64, ReferenceSequence) {
  // Reference outputs of SplitMix64 seeded with 1234567.
  SplitMix64 rng(1234567);
  EXPECT_EQ(rng.next(), 6457827717110365317ULL);
  EXPECT_EQ(rng.next(), 3203168211198807973ULL);
  EXPECT_EQ(rng.next(), 9817491932198370423ULL);
}

TEST(SplitMix64, DerivedStreamsAreIndependentOfCallOrder) {
  auto a = SplitMix64::derive(42, Stream::TreeBootstrap, 7);
  auto other = SplitMix64::derive(42, Stream::TreeBootstrap, 3);
  (void)other.next();
  auto b = SplitMix64::derive(42, Stream::TreeBootstrap, 7);
  EXPECT_EQ(a.next(), b.next());
}

TEST(SplitMix64, DerivedStreamsDiffer) {
  std::set<std::uint64_t> firsts;
  for (auto s : {Stream::HoldoutSplit, Stream::TreeBootstrap, Stream::Oversampling, Stream::ExplainSample,
                 Stream::ExplainBackground}) {
    for (std::uint64_t i = 0; i < 4; ++i) firsts.insert(SplitMix64::derive(42, s, i).next());
  }
  EXPECT_EQ(firsts.size(), 20u);
  EXPECT_NE(SplitMix64::derive(42, Stream::HoldoutSplit).next(), SplitMix64::derive(43, Stream::HoldoutSplit).next());
}

TEST(SplitMix64, UniformIndexStaysInRange) {
  SplitMix64 rng(9);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = rng.uniform_index(7);
    ASSERT_LT(v, 7u);
    ++hist[v];
  }
  for (int h : hist) EXPECT_NEAR(h, 10000, 600);
  EXPECT_EQ(rng.uniform_index(1), 0u);
}

TEST(SplitMix64, UniformRealInUnitInterval) {
  SplitMix64 rng(5);
  double sum = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform_real();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 10000, 0.5, 0.02);
}

TEST(Shuffle, IsAPermutation) {
  std::vector<int> v(50);
  for (int i = 0; i < 50; ++i) v[static_cast<std::size_t>(i)] = i;
  SplitMix64 rng(1);
  steer::shuffle(std::span<int>(v), rng);
  auto sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[static_cast<std::size_t>(i)], i);
}

TEST(SampleWithoutReplacement, DistinctAndBounded) {
  SplitMix64 rng(3);
  const auto s = steer::sample_without_replacement(100, 30, rng);
  ASSERT_EQ(s.size(), 30u);
  std::set<std::size_t> uniq(s.begin(), s.end());
  EXPECT_EQ(uniq.size(), 30u);
  for (auto v : s) EXPECT_LT(v, 100u);
}

TEST(SampleWithoutReplacement, ClampsToPopulation) {
  SplitMix64 rng(3);
  const auto s = steer::sample_without_replacement(5, 10, rng);
  std::set<std::size_t> uniq(s.begin(), s.end());
  EXPECT_EQ(s.size(), 5u);
  EXPECT_EQ(uniq.size(), 5u);
}
