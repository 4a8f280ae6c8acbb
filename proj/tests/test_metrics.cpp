#include <gtest/gtest.h>

#include <cmath>

#include "gossim/engine.hpp"
#include "gossim/metrics.hpp"

using namespace gossim;

namespace {

RunRecord synthetic(std::size_t nodes, std::vector<UpdateEvent> updates, Millis duration = 1000) {
  RunRecord rec;
  rec.node_count = nodes;
  rec.duration = duration;
  rec.beacon_period = 100;
  rec.injected_version = Version{1};
  rec.update_events = std::move(updates);
  rec.software_sends.assign(nodes, {});
  rec.beacon_sends.assign(nodes, 0);
  return rec;
}

}  // namespace

TEST(ConvergenceSeries, StepsMergeSameInstant) {
  const auto rec = synthetic(3, {{10, NodeId{0}, Version{1}}, {20, NodeId{1}, Version{1}}, {20, NodeId{2}, Version{1}}});
  const auto s = convergence_series(rec, Version{1});
  EXPECT_EQ(s.points, (std::vector<SeriesPoint>{{0, 0}, {10, 1}, {20, 3}, {1000, 3}}));
  EXPECT_EQ(time_to_fraction(s, 1.0), Millis{20});
  EXPECT_EQ(time_to_fraction(s, 0.3), Millis{10});
}

TEST(ConvergenceSeries, NeverConverging) {
  const auto s = convergence_series(synthetic(4, {{10, NodeId{0}, Version{1}}}), Version{1});
  EXPECT_FALSE(time_to_fraction(s, 0.9).has_value());
  EXPECT_THROW(time_to_fraction(s, 0.0), ContractViolation);
  EXPECT_THROW(convergence_series(synthetic(1, {}), Version{2}), MetricsError);
}

TEST(ConvergenceSeries, CountsNodesNotUpdates) {
  const auto rec = synthetic(2, {{10, NodeId{0}, Version{1}}, {12, NodeId{0}, Version{2}}});
  EXPECT_EQ(convergence_series(rec, Version{1}).final_count(), 1u);
}

// Averaged over matched seeds. Single runs can go either way: a GCP pull
// beacon can beat flooding to a stale node.
TEST(ConvergenceSeries, FloodingAtLeastAsFastAsGcpOnAverage) {
  std::vector<double> fp, gcp;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ScenarioSpec s;
    s.clusters = {{80, {0, 0, 30, 30}}};
    s.engine.duration = 20000;
    s.seed = seed;
    s.protocol = ProtocolConfig::fp();
    const auto a = time_to_fraction(convergence_series(run(s), Version{1}), 0.9);
    s.protocol = ProtocolConfig::gcp(5);
    const auto b = time_to_fraction(convergence_series(run(s), Version{1}), 0.9);
    ASSERT_TRUE(a && b);
    fp.push_back(static_cast<double>(*a));
    gcp.push_back(static_cast<double>(*b));
  }
  double mfp = 0, mgcp = 0;
  for (std::size_t i = 0; i < fp.size(); ++i) mfp += fp[i] / fp.size(), mgcp += gcp[i] / gcp.size();
  EXPECT_LE(mfp, mgcp);
}

TEST(LoadHistogram, IsolatedNodes) {
  ScenarioSpec s;
  s.clusters = {{1, {0, 0, 1, 1}}, {1, {500, 500, 501, 501}}, {1, {900, 0, 901, 1}}};
  s.protocol = ProtocolConfig::fp();
  s.engine.duration = 3000;
  const auto h = load_histogram(run(s));
  EXPECT_EQ(h, (std::map<std::uint64_t, std::size_t>{{0, 3}}));
}

TEST(LoadHistogram, TokenCapsOnRealRun) {
  auto s = desk_scale(builtin("c1"));
  s.engine.duration = 10000;
  s.protocol = ProtocolConfig::gcp(5);
  const auto gcp = load_histogram(run(s));
  EXPECT_LE(gcp.rbegin()->first, 5u);
  s.protocol = ProtocolConfig::fcp(5);
  const auto fcp = load_histogram(run(s));
  EXPECT_LE(fcp.rbegin()->first, 10u);
}

TEST(Bounds, ReferenceSubstitution) {
  TheoreticalParams p;
  p.upgrades = 1;
  p.tokens = 5;
  p.neighbourhood = 10;
  p.duration = 50000;
  p.beacon_period = 100;
  p.network_size = 2000;
  EXPECT_DOUBLE_EQ(bound_flooding(p), 5000);
  EXPECT_DOUBLE_EQ(bound_fcp(p), 10);
  EXPECT_DOUBLE_EQ(bound_pbp(p), 1999);
  EXPECT_DOUBLE_EQ(bound_gcp(p), 5);
  p.upgrades = 0;
  EXPECT_DOUBLE_EQ(bound_gcp(p), 0);
}

TEST(Reliability, KnownValues) {
  EXPECT_NEAR(gossip_reliability(0), 0.3678794411714423, 1e-12);
  EXPECT_NEAR(gossip_reliability(3), 0.951431992900, 1e-9);
  EXPECT_NEAR(gossip_reliability(50), 1.0, 1e-15);
  EXPECT_LT(gossip_reliability(1), gossip_reliability(2));
}

TEST(Savings, EdgesAndMismatch) {
  auto flood = synthetic(2, {});
  flood.software_sends[0] = {{Version{1}, 10}};
  auto none = flood;
  none.software_sends[0].clear();
  EXPECT_DOUBLE_EQ(savings(none, flood), 100.0);
  EXPECT_DOUBLE_EQ(savings(flood, flood), 0.0);
  auto other = flood;
  other.seed = 99;
  EXPECT_THROW(savings(other, flood), MetricsError);
  EXPECT_THROW(savings(flood, none), MetricsError);
}
