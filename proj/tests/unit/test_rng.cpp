// Copyright 2026 The modebench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <set>

#include "modebench/rng.hpp"

namespace modebench {
namespace {

TEST(Philox, KnownAnswerZero) {
  const auto out = philox4x32_10({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out[0], 0x6627e8d5U);
  EXPECT_EQ(out[1], 0xe169c58dU);
  EXPECT_EQ(out[2], 0xbc57ac4cU);
  EXPECT_EQ(out[3], 0x9b00dbd8U);
}

TEST(Philox, KnownAnswerOnes) {
  const auto out = philox4x32_10({0xffffffffU, 0xffffffffU, 0xffffffffU, 0xffffffffU},
                                 {0xffffffffU, 0xffffffffU});
  EXPECT_EQ(out[0], 0x408f276dU);
  EXPECT_EQ(out[1], 0x41c83b0eU);
  EXPECT_EQ(out[2], 0xa20bc7c6U);
  EXPECT_EQ(out[3], 0x6d5451fdU);
}

TEST(Philox, KnownAnswerPi) {
  const auto out = philox4x32_10({0x243f6a88U, 0x85a308d3U, 0x13198a2eU, 0x03707344U},
                                 {0xa4093822U, 0x299f31d0U});
  EXPECT_EQ(out[0], 0xd16cfe09U);
  EXPECT_EQ(out[1], 0x94fdccebU);
  EXPECT_EQ(out[2], 0x5001e420U);
  EXPECT_EQ(out[3], 0x24126ea1U);
}

TEST(RngStream, PureFunctionOfSeedAndPath) {
  RngStream a(42, {1, 2, 3});
  RngStream b(42, {1, 2, 3});
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(a(), b());
  }
  RngStream c(42, {1, 2, 3});
  RngStream d(42, {1, 2, 3});
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(c.normal(), d.normal());
  }
}

TEST(RngStream, ChildMatchesExtendedPath) {
  const RngStream parent(7, {4});
  RngStream child = parent.child(9);
  RngStream direct(7, {4, 9});
  for (int i = 0; i < 100; ++i) {
    ASSERT_EQ(child(), direct());
  }
}

TEST(RngStream, DistinctPathsDiffer) {
  std::set<std::uint64_t> firsts;
  for (std::uint64_t i = 0; i < 256; ++i) {
    RngStream s(1, {i});
    firsts.insert(s());
  }
  RngStream other_seed(2, {0});
  firsts.insert(other_seed());
  EXPECT_EQ(firsts.size(), 257U);
}

TEST(RngStream, DistinctPathsUncorrelated) {
  RngStream a(3, {0});
  RngStream b(3, {1});
  const int n = 200000;
  double sab = 0.0;
  for (int i = 0; i < n; ++i) {
    sab += a.normal() * b.normal();
  }
  EXPECT_LT(std::abs(sab / n), 4.0 / std::sqrt(n));
}

TEST(RngStream, UniformInOpenUnitInterval) {
  RngStream s(5);
  double sum = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(RngStream, NormalMoments) {
  RngStream s(11, {2});
  const int n = 1000000;
  double m = 0.0;
  double m2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal();
    m += z;
    m2 += z * z;
  }
  m /= n;
  m2 /= n;
  EXPECT_LT(std::abs(m), 4.0 / std::sqrt(n));
  EXPECT_NEAR(m2 - m * m, 1.0, 0.01);
}

}  // namespace
}  // namespace modebench
