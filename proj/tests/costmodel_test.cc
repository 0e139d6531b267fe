/* Copyright 2026 The Whatif Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "whatif/costmodel.h"

#include <cmath>
#include <limits>
#include <random>

#include "gtest/gtest.h"
#include "testing/generators.h"

namespace whatif {
namespace {

AddCostModel TwoSegment() {
  return *AddCostModel::Create({{0, 0.0}, {1'000'000, 1e-5}, {2'000'000, 2e-5}});
}

TEST(AddEstTest, InterpolatesWithinSegment) {
  EXPECT_DOUBLE_EQ(AddEst(TwoSegment(), 1'500'000), 1.5e-5);
}

TEST(AddEstTest, AnchoredAtZero) { EXPECT_EQ(AddEst(TwoSegment(), 0), 0.0); }

TEST(AddEstTest, ExtrapolatesWithFinalSlope) {
  AddCostModel model = *AddCostModel::Create({{0, 0.0}, {1'000'000, 1e-5}});
  // Final slope is 1e-11 s/B, so 3e6 B costs 3e-5 s.
  EXPECT_DOUBLE_EQ(AddEst(model, 3'000'000), 3e-5);
}

TEST(AddEstTest, ZeroModelCostsNothing) {
  EXPECT_EQ(AddEst(AddCostModel::Zero(), 123456789), 0.0);
}

TEST(AddEstTest, DefaultModelIsThreeBytesPerByteOfMemoryTraffic) {
  const double expected = 3.0 * 1e6 / AddCostModel::kDefaultMemoryBandwidth;
  EXPECT_NEAR(AddEst(AddCostModel::Default(), 1'000'000), expected, 1e-18);
}

TEST(AddCostModelTest, RejectsInvalidSamples) {
  EXPECT_FALSE(AddCostModel::Create({}).ok());
  EXPECT_FALSE(AddCostModel::Create({{1, 0.0}}).ok());
  EXPECT_FALSE(AddCostModel::Create({{0, 0.0}, {10, 1.0}, {10, 2.0}}).ok());
  EXPECT_FALSE(AddCostModel::Create({{0, 0.0}, {10, 1.0}, {20, 0.5}}).ok());
}

TEST(AddCostModelTest, CsvRoundTrip) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    AddCostModel model = testing::RandomAddModel(rng);
    absl::StatusOr<AddCostModel> back =
        ParseAddCostCsv(SerializeAddCostCsv(model));
    ASSERT_TRUE(back.ok()) << back.status();
    ASSERT_EQ(back->samples().size(), model.samples().size());
    for (size_t k = 0; k < model.samples().size(); ++k) {
      EXPECT_EQ(back->samples()[k].size_bytes, model.samples()[k].size_bytes);
      EXPECT_EQ(back->samples()[k].seconds, model.samples()[k].seconds);
    }
  }
  EXPECT_FALSE(ParseAddCostCsv("size_bytes,seconds\n0,0\nx,1\n").ok());
}

TEST(TransmissionTimeTest, FullModelAtTwoWorkers) {
  // At N=2 the ring factor 2(N-1)/N is 1.
  EXPECT_NEAR(TransmissionTime(97'000'000, {2, 100e9}, {}), 7.76e-3, 1e-15);
}

TEST(TransmissionTimeTest, SingleWorkerSendsNothing) {
  EXPECT_EQ(TransmissionTime(97'000'000, {1, 100e9}, {}), 0.0);
}

TEST(TransmissionTimeTest, SixtyFourWorkers) {
  // 2 * 1e6 * 8 * 63 / 64 / 1e9 evaluated exactly in rational arithmetic.
  EXPECT_NEAR(TransmissionTime(1'000'000, {64, 1e9}, {}), 0.01575, 1e-16);
}

TEST(TransmissionTimeTest, InfiniteBandwidthIsFree) {
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_EQ(TransmissionTime(1'000'000, {64, inf}, {}), 0.0);
}

TEST(AllReduceCostTest, Examples) {
  EXPECT_EQ(AllReduceCost(1'000'000, {1, 1e9}, AddCostModel::Default(), {}),
            0.0);
  EXPECT_NEAR(AllReduceCost(97'000'000, {2, 100e9}, AddCostModel::Zero(), {}),
              7.76e-3, 1e-15);
  AddCostModel add = *AddCostModel::Create({{0, 0.0}, {1'000'000, 1e-5}});
  // Transmission 2*2e6*8*0.5/1e9 plus one add over a 1e6 B shard.
  EXPECT_NEAR(AllReduceCost(2'000'000, {2, 1e9}, add, {}), 1.6e-2 + 1e-5,
              1e-15);
}

TEST(ShardBytesTest, RoundsHalfUp) {
  EXPECT_EQ(ShardBytes(10, 4), 3u);  // 2.5
  EXPECT_EQ(ShardBytes(9, 4), 2u);   // 2.25
  EXPECT_EQ(ShardBytes(11, 4), 3u);  // 2.75
  EXPECT_EQ(ShardBytes(0, 4), 0u);
  EXPECT_EQ(ShardBytes(7, 1), 7u);
}

TEST(ConfigValidationTest, Bounds) {
  EXPECT_FALSE((ClusterConfig{0, 1e9}).Validate().ok());
  EXPECT_FALSE((ClusterConfig{2, 0.0}).Validate().ok());
  EXPECT_FALSE((ClusterConfig{2, std::nan("")}).Validate().ok());
  EXPECT_TRUE((ClusterConfig{2, std::numeric_limits<double>::infinity()})
                  .Validate()
                  .ok());
  EXPECT_FALSE((CompressionModel{0.5}).Validate().ok());
  EXPECT_TRUE((CompressionModel{1.0}).Validate().ok());
}

// Property: transmission is monotone in S, N, bandwidth and ratio.
TEST(CostModelPropertyTest, TransmissionMonotone) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<uint64_t> size(0, 1'000'000'000);
  std::uniform_int_distribution<int> workers(1, 256);
  std::uniform_real_distribution<double> ratio(1.0, 100.0);
  for (int i = 0; i < 2000; ++i) {
    const uint64_t s = size(rng);
    const int n = workers(rng);
    const double bw = testing::RandomBandwidth(rng);
    const double r = ratio(rng);
    const double base = TransmissionTime(s, {n, bw}, {r});
    EXPECT_LE(base, TransmissionTime(s + 1000, {n, bw}, {r}));
    EXPECT_LE(base, TransmissionTime(s, {n + 1, bw}, {r}));
    EXPECT_GE(base, TransmissionTime(s, {n, bw * 1.5}, {r}));
    EXPECT_GE(base, TransmissionTime(s, {n, bw}, {r * 1.5}));
  }
}

// Property: the transmission term approaches 2*S*8/bw from below.
TEST(CostModelPropertyTest, TransmissionConvergesFromBelow) {
  const uint64_t s = 97'000'000;
  const double bw = 10e9;
  const double limit = 2.0 * static_cast<double>(s) * 8.0 / bw;
  double prev = 0;
  for (int n = 2; n <= 1 << 16; n *= 2) {
    const double t = TransmissionTime(s, {n, bw}, {});
    EXPECT_LT(t, limit);
    EXPECT_GT(t, prev);
    prev = t;
  }
  EXPECT_NEAR(prev, limit, limit * 1e-4);
}

// Property: the estimate reproduces every sample exactly.
TEST(CostModelPropertyTest, AddEstHitsSamples) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 200; ++i) {
    AddCostModel model = testing::RandomAddModel(rng);
    for (const auto& s : model.samples()) {
      ASSERT_EQ(AddEst(model, s.size_bytes), s.seconds);
    }
  }
}

// Property: the estimate is non-decreasing and continuous at sample points.
TEST(CostModelPropertyTest, AddEstMonotoneAndContinuous) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 200; ++i) {
    AddCostModel model = testing::RandomAddModel(rng);
    const uint64_t last = model.samples().back().size_bytes;
    double prev = 0;
    for (uint64_t x = 0; x <= 2 * last; x += std::max<uint64_t>(1, last / 97)) {
      const double v = AddEst(model, x);
      ASSERT_GE(v, prev);
      prev = v;
    }
    for (const auto& s : model.samples()) {
      if (s.size_bytes == 0) continue;
      EXPECT_NEAR(AddEst(model, s.size_bytes - 1), s.seconds, 1e-9);
      EXPECT_NEAR(AddEst(model, s.size_bytes + 1), s.seconds, 1e-9);
    }
  }
}

// Property: compression scales only the transmission term.
TEST(CostModelPropertyTest, CompressionScalesTransmissionOnly) {
  std::mt19937_64 rng(14);
  std::uniform_int_distribution<uint64_t> size(1, 1'000'000'000);
  std::uniform_int_distribution<int> workers(2, 128);
  std::uniform_real_distribution<double> ratio(1.0, 1000.0);
  for (int i = 0; i < 2000; ++i) {
    const uint64_t s = size(rng);
    const ClusterConfig cluster{workers(rng), testing::RandomBandwidth(rng)};
    const AddCostModel add = testing::RandomAddModel(rng);
    const double r = ratio(rng);
    const double compressed = AllReduceCost(s, cluster, add, {r});
    const double reduction = ReductionTime(s, cluster, add);
    const double wire = TransmissionTime(s, cluster, {});
    EXPECT_NEAR(compressed - reduction, wire / r,
                1e-12 * std::max(1.0, compressed));
  }
}

}  // namespace
}  // namespace whatif
