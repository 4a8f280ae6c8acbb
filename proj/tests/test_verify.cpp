#include <gtest/gtest.h>

#include "gossim/acceptance.hpp"
#include "gossim/verify/contact_closure.hpp"
#include "gossim/verify/recording.hpp"

using namespace gossim;

TEST(Replay, DetectsADivergentLog) {
  auto s = acceptance::dense_cluster(acceptance::Scale::Desk);
  s.engine.duration = 3000;
  s.protocol = ProtocolConfig::gcp(2);
  verify::RecordingObserver obs(s.geometric_node_count());
  run(s, obs);
  EXPECT_FALSE(verify::replay_against_reference(obs.log(), reference::Protocol::GCP, 2).has_value());
  // Same log against the wrong protocol must not pass.
  EXPECT_TRUE(verify::replay_against_reference(obs.log(), reference::Protocol::FCP, 2).has_value());
  EXPECT_TRUE(verify::replay_against_reference(obs.log(), reference::Protocol::GCP, 3).has_value());
}

TEST(TraceClosure, ChainSweepCertifiesEveryone) {
  const auto trace = acceptance::sweep_trace();
  const verify::ClosureParams p{3.0, 100, 1, 50000};
  for (std::uint32_t start = 0; start < 8; ++start) {
    const auto b = verify::trace_closure(trace, NodeId{start}, 1000, p);
    EXPECT_TRUE(verify::certifies_all(b)) << start;
  }
}

TEST(TraceClosure, ShortContactsCertifyNothing) {
  const ContactTrace trace({{1000, 1050, NodeId{0}, NodeId{1}}});
  const auto b = verify::trace_closure(trace, NodeId{0}, 0, {3.0, 100, 1, 50000});
  EXPECT_EQ(b[1], verify::kNever);
}

TEST(TraceClosure, BoundsHoldOnTraceRuns) {
  const auto trace = acceptance::sweep_trace();
  ScenarioSpec s;
  s.clusters.clear();
  s.trace = "<memory>";
  s.protocol = ProtocolConfig::fp();
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    s.seed = seed;
    const auto rec = run(s, trace);
    const auto b = verify::trace_closure(trace, rec.injected_node, rec.injection_time, {3.0, 100, 1, s.engine.duration});
    for (std::uint32_t n = 0; n < b.size(); ++n) {
      Millis got = verify::kNever;
      for (const auto& u : rec.update_events)
        if (u.node == NodeId{n}) got = std::min(got, u.t);
      EXPECT_LE(got, b[n]) << "seed " << seed << " node " << n;
    }
  }
}

TEST(ContactClosure, GeometricBoundsHold) {
  auto s = acceptance::dense_cluster(acceptance::Scale::Desk);
  s.engine.duration = 8000;
  s.protocol = ProtocolConfig::fp();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    s.seed = seed;
    verify::ContactClosureObserver closure(s.geometric_node_count(), {s.radio.r, 100, 1, s.engine.duration});
    const auto rec = run(s, closure);
    std::size_t certified = 0;
    for (std::uint32_t n = 0; n < rec.node_count; ++n) {
      if (closure.bounds()[n] == verify::kNever) continue;
      ++certified;
      Millis got = verify::kNever;
      for (const auto& u : rec.update_events)
        if (u.node == NodeId{n}) got = std::min(got, u.t);
      EXPECT_LE(got, closure.bounds()[n]) << "seed " << seed << " node " << n;
    }
    EXPECT_GT(certified, 1u);
  }
}
