#include <gtest/gtest.h>

#include <algorithm>

#include "gossim/engine.hpp"
#include "gossim/metrics.hpp"

using namespace gossim;

namespace {

// n nodes confined to a 1 mm square: always within r of each other.
ScenarioSpec huddle(std::uint32_t n, ProtocolConfig p, std::uint64_t seed = 1) {
  ScenarioSpec s;
  s.name = "huddle";
  s.clusters = {{n, {0, 0, 0.001, 0.001}}};
  s.protocol = p;
  s.seed = seed;
  s.engine.duration = 5000;
  return s;
}

std::optional<Millis> first_update(const RunRecord& rec, NodeId n) {
  for (const auto& u : rec.update_events)
    if (u.node == n) return u.t;
  return std::nullopt;
}

}  // namespace

TEST(Engine, SingleNodeUpdatesAtInjectionAndNeverSends) {
  for (auto p : {ProtocolConfig::fp(), ProtocolConfig::fcp(2), ProtocolConfig::pbp(), ProtocolConfig::gcp(2)}) {
    const auto rec = run(huddle(1, p));
    EXPECT_EQ(total_software_sends(rec), 0u);
    const auto series = convergence_series(rec, rec.injected_version);
    EXPECT_EQ(series.points, (std::vector<SeriesPoint>{{0, 0}, {1000, 1}, {5000, 1}}));
  }
}

TEST(Engine, TwoCoLocatedGcpNodesConvergeWithinOneBeaconPeriod) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto spec = huddle(2, ProtocolConfig::gcp(1), seed);
    const auto rec = run(spec);
    const NodeId other{1 - rec.injected_node.value};
    const auto t = first_update(rec, other);
    ASSERT_TRUE(t.has_value()) << "seed " << seed;
    EXPECT_LE(*t, spec.engine.injection_time + spec.engine.beacon_period + 2 * spec.engine.delivery_latency) << "seed " << seed;
  }
}

TEST(Engine, SameSeedSameRecord) {
  const auto spec = desk_scale(builtin("c4-social"));
  EXPECT_EQ(run(spec), run(spec));
  auto other = spec;
  other.seed = spec.seed + 1;
  EXPECT_FALSE(run(spec) == run(other));
}

TEST(Engine, PlacementInsideClusterRectangles) {
  const auto spec = desk_scale(builtin("c9-social"));
  NullObserver none;
  Engine<NullObserver> engine(spec, std::nullopt, none);
  ASSERT_EQ(engine.nodes().size(), spec.geometric_node_count());
  for (std::size_t i = 0; i < engine.nodes().size(); ++i) EXPECT_TRUE(engine.areas()[i].contains(engine.nodes()[i].position));
  // Transmitters come last and roam the whole area.
  EXPECT_EQ(engine.areas().back(), spec.transmitters->area);
}

TEST(Engine, OneTransmissionFansOutToEveryCertainReceiver) {
  NullObserver none;
  Engine<NullObserver> engine(huddle(4, ProtocolConfig::fp()), std::nullopt, none);
  const std::vector<ProtocolAction> send{SendSoftware{Version{0}}};
  const auto events = engine.emit_actions(NodeId{0}, send, 10);
  EXPECT_EQ(events.size(), 3u);
  for (const auto& e : events) {
    EXPECT_EQ(e.kind, EventKind::Deliver);
    EXPECT_EQ(e.at, 11);
    EXPECT_NE(e.node, NodeId{0});
  }
  EXPECT_EQ(total_software_sends(engine.record()), 1u);
}

TEST(Engine, IsolatedBeaconStillCounted) {
  ScenarioSpec s;
  s.clusters = {{1, {0, 0, 1, 1}}, {1, {100, 100, 101, 101}}};
  NullObserver none;
  Engine<NullObserver> engine(s, std::nullopt, none);
  const std::vector<ProtocolAction> pull{SendBeacon{}};
  EXPECT_TRUE(engine.emit_actions(NodeId{0}, pull, 10).empty());
  EXPECT_EQ(engine.record().beacon_sends[0], 1u);
}

TEST(Engine, UpdateLocalIsLogged) {
  NullObserver none;
  Engine<NullObserver> engine(huddle(2, ProtocolConfig::pbp()), std::nullopt, none);
  const std::vector<ProtocolAction> up{UpdateLocal{Version{2}}};
  engine.emit_actions(NodeId{1}, up, 42);
  ASSERT_FALSE(engine.record().update_events.empty());
  EXPECT_EQ(engine.record().update_events.back(), (UpdateEvent{42, NodeId{1}, Version{2}}));
  EXPECT_EQ(engine.nodes()[1].version, Version{2});
}

TEST(VerifyDigest, CorruptionProbabilityExtremesAndRate) {
  const auto d = image_digest(Version{1}, 64);
  Message m{MessageKind::Software, NodeId{0}, Version{1}, d};
  RandomStream rng(4);
  for (int i = 0; i < 100; ++i) EXPECT_TRUE(verify_digest(m, rng, 0.0, d));
  auto wrong = m;
  wrong.payload_digest->at(0) ^= 1;
  EXPECT_FALSE(verify_digest(wrong, rng, 0.0, d));
  const int n = 10000;
  int failures = 0;
  for (int i = 0; i < n; ++i) failures += !verify_digest(m, rng, 0.5, d);
  EXPECT_NEAR(failures, 5000, 3 * std::sqrt(n * 0.25));
}

TEST(Engine, CorruptedCopiesTriggerPullBeacons) {
  auto spec = huddle(5, ProtocolConfig::gcp(3));
  spec.engine.corruption_probability = 0.5;
  const auto rec = run(spec);
  EXPECT_GT(rec.tally.digest_failures, 0u);
  EXPECT_GE(rec.tally.pull_beacons, rec.tally.digest_failures);
}

TEST(Engine, NoDeliveryPastDuration) {
  auto spec = huddle(3, ProtocolConfig::fp());
  spec.engine.duration = 1200;
  const auto rec = run(spec);
  for (const auto& u : rec.update_events) EXPECT_LE(u.t, 1200);
  // Every FP beacon reception answers with exactly one transmission.
  EXPECT_EQ(total_software_sends(rec), rec.tally.beacon_receptions);
}

TEST(Engine, TraceModeFollowsContacts) {
  std::vector<Contact> cs{{1000, 1500, NodeId{0}, NodeId{1}}, {2000, 2500, NodeId{1}, NodeId{2}}};
  ScenarioSpec s;
  s.name = "trace";
  s.clusters.clear();
  s.trace = "<memory>";
  s.protocol = ProtocolConfig::fp();
  s.engine.duration = 4000;
  s.engine.injection_time = 500;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    s.seed = seed;
    const auto rec = run(s, ContactTrace(cs));
    ASSERT_EQ(rec.node_count, 3u);
    // The 0-1 contact ends before 1 meets 2, so 0 is out of reach from 2.
    for (std::uint32_t n = 0; n < 3; ++n) {
      const auto t = first_update(rec, NodeId{n});
      if (rec.injected_node == NodeId{2} && n == 0) {
        EXPECT_FALSE(t.has_value());
        continue;
      }
      ASSERT_TRUE(t.has_value()) << "seed " << seed << " node " << n;
      if (NodeId{n} != rec.injected_node) {
        const bool in_window = (*t > 1000 && *t <= 1500) || (*t > 2000 && *t <= 2500);
        EXPECT_TRUE(in_window) << "node " << n << " at " << *t;
      }
    }
  }
}

TEST(Engine, LoadsTraceFromDisk) {
  ScenarioSpec s;
  s.clusters.clear();
  s.trace = std::string(GOSSIM_DATA_DIR) + "/chain-trace.csv";
  s.engine.duration = 12000;
  s.protocol = ProtocolConfig::pbp();
  const auto rec = run(s);
  EXPECT_EQ(rec.node_count, 8u);
  s.trace = "/nonexistent/trace.csv";
  EXPECT_THROW(run(s), SemanticError);
}
