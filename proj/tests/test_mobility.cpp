#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "gossim/mobility.hpp"

using namespace gossim;

namespace {
const AreaRect kBox{0, 0, 10, 10};
const double kHalfSqrt2 = std::sqrt(2.0) / 2.0;
}

TEST(Advance, MidLegStepIsSpeedTimesTick) {
  RandomStream rng(1);
  NodeState s;
  s.position = {5, 5};
  s.motion = {true, {1, 0}, 1.0, 1000, 0};
  const auto next = advance(s, 10, kBox, MobilityParams{}, rng);
  EXPECT_NEAR(next.position.x, 5.001, 1e-12);
  EXPECT_DOUBLE_EQ(next.position.y, 5.0);
}

TEST(Advance, PausedNodeStaysPut) {
  RandomStream rng(1);
  NodeState s;
  s.position = {5, 5};
  s.motion.moving = false;
  s.motion.pause_until = 60;
  EXPECT_EQ(advance(s, 10, kBox, MobilityParams{}, rng).position, s.position);
}

TEST(Advance, RejectsNodeOutsideArea) {
  RandomStream rng(1);
  NodeState s;
  s.position = {11, 5};
  EXPECT_THROW(advance(s, 1, kBox, MobilityParams{}, rng), ContractViolation);
}

TEST(Advance, StaysInsideAreaWithUnitDirection) {
  RandomStream rng(2);
  const AreaRect small{0, 0, 1, 1};
  NodeState s;
  s.position = {0.5, 0.5};
  for (Millis t = 1; t <= 50000; ++t) {
    advance_in_place(s, t, small, MobilityParams{}, rng);
    ASSERT_TRUE(small.contains(s.position));
    ASSERT_NEAR(std::hypot(s.motion.direction.x, s.motion.direction.y), 1.0, 1e-9);
  }
}

TEST(StartLeg, SpeedAndDurationDistribution) {
  RandomStream rng(3);
  const MobilityParams mp;
  Motion m;
  const int n = 100000;
  double sum = 0;
  for (int i = 0; i < n; ++i) {
    start_leg(m, 0, mp, rng);
    ASSERT_GE(m.speed, 0.8);
    ASSERT_LT(m.speed, 2.0);
    ASSERT_GE(m.leg_end, 100);
    ASSERT_LE(m.leg_end, 500);
    sum += m.speed;
  }
  const double sigma = 1.2 / std::sqrt(12.0) / std::sqrt(static_cast<double>(n));
  EXPECT_NEAR(sum / n, 1.4, 3 * sigma);
}

TEST(Bounce, RightWallFlipsX) {
  const auto [pos, dir] = bounce({10.2, 5}, {kHalfSqrt2, kHalfSqrt2}, kBox);
  EXPECT_NEAR(pos.x, 9.8, 1e-12);
  EXPECT_DOUBLE_EQ(dir.x, -kHalfSqrt2);
  EXPECT_DOUBLE_EQ(dir.y, kHalfSqrt2);
}

TEST(Bounce, NormalIncidenceOnBottom) {
  const auto [pos, dir] = bounce({5, -0.1}, {0, -1}, kBox);
  EXPECT_NEAR(pos.y, 0.1, 1e-12);
  EXPECT_EQ(dir, (Vec2{0, 1}));
}

TEST(Bounce, CornerFlipsBothAndKeepsNorm) {
  const auto [pos, dir] = bounce({10.1, 10.1}, {kHalfSqrt2, kHalfSqrt2}, kBox);
  EXPECT_TRUE(kBox.contains(pos));
  EXPECT_DOUBLE_EQ(dir.x, -kHalfSqrt2);
  EXPECT_DOUBLE_EQ(dir.y, -kHalfSqrt2);
  EXPECT_NEAR(std::hypot(dir.x, dir.y), 1.0, 1e-12);
}

TEST(ContactTrace, HalfOpenIntervals) {
  const ContactTrace trace({{0, 100, NodeId{0}, NodeId{1}}});
  EXPECT_EQ(trace.contacts_at(50), (std::vector<NodePair>{{NodeId{0}, NodeId{1}}}));
  EXPECT_TRUE(trace.contacts_at(100).empty());
  EXPECT_EQ(trace.neighbours_at(NodeId{1}, 0), std::vector<NodeId>{NodeId{0}});
}

TEST(ContactTrace, OverlappingPairsAllReturned) {
  const ContactTrace trace({{0, 100, NodeId{2}, NodeId{0}}, {50, 150, NodeId{1}, NodeId{2}}});
  EXPECT_EQ(trace.contacts_at(60), (std::vector<NodePair>{{NodeId{0}, NodeId{2}}, {NodeId{1}, NodeId{2}}}));
  EXPECT_EQ(trace.node_count(), 3u);
}

TEST(ContactTrace, CsvRoundTrip) {
  std::istringstream in("t_start_ms,t_end_ms,node_a,node_b\n10,20,3,1\n0,5,0,1\n");
  const auto trace = ContactTrace::from_csv(in);
  ASSERT_EQ(trace.contacts().size(), 2u);
  EXPECT_EQ(trace.contacts()[0], (Contact{0, 5, NodeId{0}, NodeId{1}}));
  EXPECT_EQ(trace.contacts()[1], (Contact{10, 20, NodeId{1}, NodeId{3}}));
}

TEST(ContactTrace, CsvErrorsCarryLineNumbers) {
  auto fails_on = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      ContactTrace::from_csv(in);
    } catch (const TraceError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(fails_on("a,b,c,d\n"), 1u);
  EXPECT_EQ(fails_on("t_start_ms,t_end_ms,node_a,node_b\n0,5,0,1\n5,5,0,1\n"), 3u);
  EXPECT_EQ(fails_on("t_start_ms,t_end_ms,node_a,node_b\n0,5,0\n"), 2u);
  EXPECT_EQ(fails_on("t_start_ms,t_end_ms,node_a,node_b\n0,5,x,1\n"), 2u);
  EXPECT_EQ(fails_on("t_start_ms,t_end_ms,node_a,node_b\n0,5,2,2\n"), 2u);
  std::istringstream overlap("t_start_ms,t_end_ms,node_a,node_b\n0,10,0,1\n5,15,1,0\n");
  EXPECT_THROW(ContactTrace::from_csv(overlap), TraceError);
}
