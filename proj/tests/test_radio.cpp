#include <gtest/gtest.h>

#include <cmath>

#include "gossim/radio.hpp"

using namespace gossim;

namespace {
const RadioParams kDefault{3.0, 5.0, 0.3};
}

TEST(DeliveryProbability, Branches) {
  EXPECT_EQ(delivery_probability(2.0, kDefault), 1.0);
  EXPECT_EQ(delivery_probability(6.0, kDefault), 0.0);
  EXPECT_DOUBLE_EQ(delivery_probability(5.0, kDefault), 0.3);
  EXPECT_DOUBLE_EQ(delivery_probability(3.0, kDefault), 1.0);
}

TEST(DeliveryProbability, MidpointMatchesIndependentEvaluation) {
  // 0.3 + sqrt(0.5) * 4.5 * 0.7 / 4, evaluated at 30 digits.
  EXPECT_NEAR(delivery_probability(4.0, kDefault), 0.856846590184406, 1e-12);
}

TEST(DeliveryProbability, NegativeDistanceIsAContractViolation) {
  EXPECT_THROW(delivery_probability(-1.0, kDefault), ContractViolation);
}

TEST(SampleReceivers, CertainAndImpossibleRanges) {
  RandomStream rng(1);
  const std::vector<Vec2> near{{0, 0}, {1, 0}};
  const std::vector<Vec2> far{{0, 0}, {10, 0}};
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(sample_receivers(NodeId{0}, near, kDefault, rng), std::vector<NodeId>{NodeId{1}});
    EXPECT_TRUE(sample_receivers(NodeId{0}, far, kDefault, rng).empty());
  }
}

TEST(SampleReceivers, OneTransmissionReachesAllCoLocatedNodes) {
  RandomStream rng(1);
  const std::vector<Vec2> pos(6, Vec2{2, 2});
  const auto got = sample_receivers(NodeId{3}, pos, kDefault, rng);
  EXPECT_EQ(got, (std::vector<NodeId>{NodeId{0}, NodeId{1}, NodeId{2}, NodeId{4}, NodeId{5}}));
}

TEST(SampleReceivers, EmpiricalFrequencyMatchesModel) {
  RandomStream rng(5);
  const std::vector<Vec2> pos{{0, 0}, {4, 0}};
  const int n = 100000;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += !sample_receivers(NodeId{0}, pos, kDefault, rng).empty();
  const double p = delivery_probability(4.0, kDefault);
  EXPECT_NEAR(static_cast<double>(hits) / n, p, 3 * std::sqrt(p * (1 - p) / n));
}

TEST(SpatialHashGrid, MatchesBruteForceIncludingDraws) {
  RandomStream place(3);
  std::vector<Vec2> pos;
  for (int i = 0; i < 400; ++i) pos.push_back({place.uniform(-20, 40), place.uniform(-20, 40)});
  SpatialHashGrid grid(kDefault.R);
  grid.rebuild(pos);
  RandomStream a(11), b(11);
  std::vector<std::uint32_t> scratch;
  for (int round = 0; round < 5; ++round) {
    for (std::uint32_t s = 0; s < pos.size(); ++s) {
      ASSERT_EQ(sample_receivers(NodeId{s}, pos, kDefault, a), sample_receivers(NodeId{s}, pos, grid, kDefault, b, scratch));
    }
    // Move everybody and keep the grid in sync incrementally.
    for (std::uint32_t i = 0; i < pos.size(); ++i) {
      pos[i] = pos[i] + Vec2{place.uniform(-3, 3), place.uniform(-3, 3)};
      grid.update(NodeId{i}, pos[i]);
    }
  }
  EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(SpatialHashGrid, RejectsCellsSmallerThanRange) {
  SpatialHashGrid grid(2.0);
  const std::vector<Vec2> pos{{0, 0}};
  grid.rebuild(pos);
  RandomStream rng(1);
  std::vector<std::uint32_t> scratch;
  EXPECT_THROW(sample_receivers(NodeId{0}, pos, grid, kDefault, rng, scratch), ContractViolation);
}
