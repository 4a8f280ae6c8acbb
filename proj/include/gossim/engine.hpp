#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "gossim/core.hpp"
#include "gossim/digest.hpp"
#include "gossim/mobility.hpp"
#include "gossim/protocols.hpp"
#include "gossim/radio.hpp"
#include "gossim/record.hpp"
#include "gossim/rng.hpp"
#include "gossim/scenarios.hpp"

namespace gossim {

enum class EventKind : std::uint8_t { BeaconFire, Deliver, Movement, InjectVersion, End };

/// Scheduler entry. Processed in (at, seq) order; seq is the insertion
/// counter, so same-instant events run first-in first-out.
struct Event {
  Millis at = 0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::End;
  NodeId node;  // BeaconFire: the beacon owner. Deliver: the receiver.
  Message message;
  Version version;  // InjectVersion only

  friend bool operator==(const Event&, const Event&) = default;
};

/// What a node's protocol machine was fed. Recorded by observers so that a
/// run's per-node input sequence can be replayed elsewhere.
struct ProtocolInput {
  enum class Kind : std::uint8_t { Beacon, Software, Inject };
  Kind kind = Kind::Beacon;
  NodeId from;
  std::optional<Version> remote_version;  // Beacon
  Version payload_version;  // Software, Inject
  bool digest_ok = true;  // Software

  friend bool operator==(const ProtocolInput&, const ProtocolInput&) = default;
};

struct NullObserver {};

/// Checks digest integrity of a received software message. With
/// probability `corruption_probability` the copy is treated as damaged in
/// transit; otherwise the carried digest is compared with `expected`.
inline bool verify_digest(const Message& message, RandomStream& rng, double corruption_probability, const Digest& expected) {
  require(message.kind == MessageKind::Software, "verify_digest: not a software message");
  if (corruption_probability > 0.0 && rng.bernoulli(corruption_probability)) return false;
  return message.payload_digest && *message.payload_digest == expected;
}

/// Reads the trace a spec points at.
inline ContactTrace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SemanticError("trace", "cannot open trace file '" + path + "'");
  return ContactTrace::from_csv(in);
}

/// Deterministic single-threaded event loop for one run.
///
/// Mobility is integrated tick by tick whenever the clock advances, before
/// any event at the new instant is handled; this is the Movement step. The
/// remaining event kinds live in a (time, insertion) ordered queue.
template <class Observer = NullObserver>
class Engine {
 public:
  Engine(const ScenarioSpec& spec, std::optional<ContactTrace> trace, Observer& observer)
      : spec_(spec),
        trace_(std::move(trace)),
        observer_(observer),
        grid_(spec.radio.R),
        rng_mobility_(RandomStream::substream(spec.seed, "mobility")),
        rng_radio_(RandomStream::substream(spec.seed, "radio")),
        rng_corruption_(RandomStream::substream(spec.seed, "corruption")) {
    validate(spec_);
    require(spec_.trace.has_value() == trace_.has_value(), "Engine: trace presence does not match spec");
    setup();
  }

  RunRecord run() && {
    if constexpr (requires { observer_.on_tick(Millis{0}, std::span<const Vec2>(positions_)); })
      if (!trace_) observer_.on_tick(Millis{0}, std::span<const Vec2>(positions_));
    while (!queue_.empty()) {
      const Event e = queue_.top();
      queue_.pop();
      if (e.at > spec_.engine.duration) break;
      advance_clock(e.at);
      if (e.kind == EventKind::End) break;
      handle(e);
    }
    return std::move(record_);
  }

  /// Interprets protocol actions emitted by `node` at time t. Sends sample
  /// the radio once per transmission and fan out into one Deliver per
  /// receiver; UpdateLocal is applied and logged immediately.
  std::vector<Event> emit_actions(NodeId node, std::span<const ProtocolAction> actions, Millis t) {
    std::vector<Event> out;
    auto& state = nodes_[node.index()];
    for (const auto& action : actions) {
      if (const auto* send = std::get_if<SendSoftware>(&action)) {
        require(send->version == state.version, "SendSoftware must carry the sender's current version");
        Message m{MessageKind::Software, node, send->version, digest_of(send->version)};
        count_software(node, send->version);
        ++record_.tally.software_transmissions;
        transmit(node, m, t, out);
      } else if (std::holds_alternative<SendBeacon>(action)) {
        ++record_.tally.pull_beacons;
        ++record_.beacon_sends[node.index()];
        transmit(node, make_beacon(state, spec_.protocol), t, out);
      } else if (const auto* up = std::get_if<UpdateLocal>(&action)) {
        state.version = std::max(state.version, up->version);
        record_.update_events.push_back({t, node, up->version});
      }
    }
    return out;
  }

  std::span<const NodeState> nodes() const { return nodes_; }
  std::span<const AreaRect> areas() const { return areas_; }
  /// The record as built so far; complete only after run().
  const RunRecord& record() const { return record_; }

 private:
  void setup() {
    const auto& e = spec_.engine;
    std::size_t n = 0;
    if (trace_) {
      n = std::max<std::size_t>(trace_->node_count(), 1);
    } else {
      n = spec_.geometric_node_count();
    }
    nodes_.resize(n);
    areas_.resize(n);
    positions_.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) nodes_[i] = initial_state(NodeId{i}, spec_.protocol);

    if (!trace_) {
      auto rng_place = RandomStream::substream(spec_.seed, "placement");
      std::size_t idx = 0;
      auto place = [&](const AreaRect& a, std::uint32_t count) {
        for (std::uint32_t k = 0; k < count; ++k, ++idx) {
          areas_[idx] = a;
          nodes_[idx].position = {rng_place.uniform(a.x_min, a.x_max), rng_place.uniform(a.y_min, a.y_max)};
          positions_[idx] = nodes_[idx].position;
        }
      };
      for (const auto& c : spec_.clusters) place(c.area, c.node_count);
      if (spec_.transmitters) place(spec_.transmitters->area, spec_.transmitters->count);
      grid_.rebuild(positions_);
    }

    record_.scenario = spec_.name;
    record_.protocol = std::string(protocol_name(spec_.protocol));
    record_.tokens = spec_.protocol.initial_tokens;
    record_.fingerprint = fingerprint(spec_);
    record_.seed = spec_.seed;
    record_.node_count = n;
    record_.duration = e.duration;
    record_.beacon_period = e.beacon_period;
    record_.injection_time = e.injection_time;
    record_.injected_version = e.injected_version;
    record_.software_sends.resize(n);
    record_.beacon_sends.assign(n, 0);
    record_.metadata = run_metadata();

    push({e.injection_time, 0, EventKind::InjectVersion, {}, {}, e.injected_version});
    auto rng_phase = RandomStream::substream(spec_.seed, "phases");
    for (std::uint32_t i = 0; i < n; ++i) {
      const Millis phase = rng_phase.uniform_int(0, e.beacon_period - 1);
      nodes_[i].next_beacon_at = phase;
      push({phase, 0, EventKind::BeaconFire, NodeId{i}, {}, {}});
    }
    // Sentinel sequence number: End sorts after everything else at `duration`.
    queue_.push({e.duration, UINT64_MAX, EventKind::End, {}, {}, {}});
  }

  std::vector<std::pair<std::string, std::string>> run_metadata() const {
    const auto& e = spec_.engine;
    return {
        {"scenario", spec_.name},
        {"protocol", std::string(protocol_name(spec_.protocol))},
        {"tokens", std::to_string(spec_.protocol.initial_tokens)},
        {"seed", std::to_string(spec_.seed)},
        {"fingerprint", std::to_string(fingerprint(spec_))},
        {"mode", trace_ ? "trace" : "geometric"},
        {"nodes", std::to_string(nodes_.size())},
        {"tick_ms", std::to_string(kTick)},
        {"beacon_period_ms", std::to_string(e.beacon_period)},
        {"beacon_phase", "uniform integer in [0, beacon_period_ms) per node"},
        {"delivery_latency_ms", std::to_string(e.delivery_latency)},
        {"duration_ms", std::to_string(e.duration)},
        {"injection_time_ms", std::to_string(e.injection_time)},
        {"injected_version", std::to_string(e.injected_version.value)},
        {"injection_target", "uniform over all nodes"},
        {"initial_version", "0"},
        {"tie_break", "same-instant events in insertion order (FIFO)"},
        {"movement", "leg model: direction U[0,2pi), duration U{min..max} ms, speed U[min,max); specular border bounce"},
        {"pause_distribution", "uniform integer in [0, pause_max_ms] after every leg"},
        {"reception", "independent draw per (transmission, receiver); positions at send tick"},
        {"digest_algorithm", kDigestAlgorithm},
        {"digest_width_bytes", std::to_string(Digest{}.size())},
        {"corruption_probability", detail::fmt_double(e.corruption_probability)},
        {"payload_bytes", std::to_string(e.payload_bytes)},
        {"radio", "r=" + detail::fmt_double(spec_.radio.r) + " R=" + detail::fmt_double(spec_.radio.R) +
                      " p_min=" + detail::fmt_double(spec_.radio.p_min)},
    };
  }

  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.at != b.at ? a.at > b.at : a.seq > b.seq;
    }
  };

  void push(Event e) {
    e.seq = next_seq_++;
    queue_.push(std::move(e));
  }

  void advance_clock(Millis to) {
    if (to <= clock_) return;
    if (!trace_) {
      for (Millis tick = clock_ + kTick; tick <= to; tick += kTick) {
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
          auto& s = nodes_[i];
          advance_in_place(s, tick, areas_[i], spec_.mobility, rng_mobility_);
          if (s.position != positions_[i]) {
            positions_[i] = s.position;
            grid_.update(s.id, s.position);
          }
        }
        if constexpr (requires { observer_.on_tick(tick, std::span<const Vec2>(positions_)); })
          observer_.on_tick(tick, std::span<const Vec2>(positions_));
      }
    }
    clock_ = to;
  }

  const Digest& digest_of(Version v) {
    auto it = digests_.find(v.value);
    if (it == digests_.end()) it = digests_.emplace(v.value, image_digest(v, spec_.engine.payload_bytes)).first;
    return it->second;
  }

  void count_software(NodeId node, Version v) {
    auto& per = record_.software_sends[node.index()];
    auto it = std::find_if(per.begin(), per.end(), [&](const VersionCount& vc) { return vc.version == v; });
    if (it == per.end()) {
      per.push_back({v, 1});
      std::sort(per.begin(), per.end(), [](const auto& a, const auto& b) { return a.version < b.version; });
    } else {
      ++it->count;
    }
  }

  std::vector<NodeId> receivers(NodeId sender, Millis t) {
    if (trace_) return trace_->neighbours_at(sender, t);
    return sample_receivers(sender, positions_, grid_, spec_.radio, rng_radio_, scratch_);
  }

  void transmit(NodeId sender, const Message& m, Millis t, std::vector<Event>& out) {
    const auto heard = receivers(sender, t);
    const Millis at = t + spec_.engine.delivery_latency;
    if (at > spec_.engine.duration) return;
    for (auto r : heard) out.push_back({at, 0, EventKind::Deliver, r, m, {}});
  }

  template <class... Args>
  void notify_input(Args&&... args) {
    if constexpr (requires { observer_.on_input(std::forward<Args>(args)...); }) observer_.on_input(std::forward<Args>(args)...);
  }

  void notify_actions(Millis t, NodeId n, std::span<const ProtocolAction> actions) {
    if constexpr (requires { observer_.on_actions(t, n, actions); }) observer_.on_actions(t, n, actions);
  }

  void apply(NodeId node, Transition tr, Millis t) {
    nodes_[node.index()].tokens = tr.state.tokens;
    notify_actions(t, node, tr.actions);
    for (auto& ev : emit_actions(node, tr.actions, t)) push(std::move(ev));
  }

  void handle(const Event& e) {
    switch (e.kind) {
      case EventKind::BeaconFire: {
        auto& s = nodes_[e.node.index()];
        ++record_.tally.periodic_beacons;
        ++record_.beacon_sends[e.node.index()];
        const auto heard = receivers(e.node, e.at);
        record_.tally.periodic_beacon_receivers += heard.size();
        const Millis at = e.at + spec_.engine.delivery_latency;
        if (at <= spec_.engine.duration) {
          const Message m = make_beacon(s, spec_.protocol);
          for (auto r : heard) push({at, 0, EventKind::Deliver, r, m, {}});
        }
        s.next_beacon_at = e.at + spec_.engine.beacon_period;
        if (s.next_beacon_at <= spec_.engine.duration) push({s.next_beacon_at, 0, EventKind::BeaconFire, e.node, {}, {}});
        break;
      }
      case EventKind::Deliver: {
        const auto& s = nodes_[e.node.index()];
        if (e.message.kind == MessageKind::Beacon) {
          ++record_.tally.beacon_receptions;
          ProtocolInput in{ProtocolInput::Kind::Beacon, e.message.sender, e.message.payload_version, {}, true};
          notify_input(e.at, e.node, in);
          apply(e.node, on_beacon(s, spec_.protocol, e.message.payload_version), e.at);
        } else {
          ++record_.tally.software_receptions;
          const Version v = *e.message.payload_version;
          const bool ok = verify_digest(e.message, rng_corruption_, spec_.engine.corruption_probability, digest_of(v));
          if (!ok) ++record_.tally.digest_failures;
          ProtocolInput in{ProtocolInput::Kind::Software, e.message.sender, std::nullopt, v, ok};
          notify_input(e.at, e.node, in);
          apply(e.node, on_software(s, spec_.protocol, v, ok), e.at);
        }
        break;
      }
      case EventKind::InjectVersion: {
        auto rng_inject = RandomStream::substream(spec_.seed, "injection");
        const NodeId target{static_cast<std::uint32_t>(rng_inject.uniform_int(0, static_cast<std::int64_t>(nodes_.size()) - 1))};
        record_.injected_node = target;
        auto& s = nodes_[target.index()];
        notify_input(e.at, target, ProtocolInput{ProtocolInput::Kind::Inject, target, std::nullopt, e.version, true});
        if (newer(e.version, s.version)) {
          s.version = e.version;
          if (s.tokens) s.tokens = refill_tokens(*s.tokens);
          record_.update_events.push_back({e.at, target, e.version});
        }
        break;
      }
      case EventKind::Movement:
      case EventKind::End:
        break;
    }
  }

  ScenarioSpec spec_;
  std::optional<ContactTrace> trace_;
  Observer& observer_;
  std::vector<NodeState> nodes_;
  std::vector<AreaRect> areas_;
  std::vector<Vec2> positions_;
  SpatialHashGrid grid_;
  std::vector<std::uint32_t> scratch_;
  RandomStream rng_mobility_;
  RandomStream rng_radio_;
  RandomStream rng_corruption_;
  std::map<std::uint32_t, Digest> digests_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t next_seq_ = 0;
  Millis clock_ = 0;
  RunRecord record_;
};

/// Runs `spec` to completion. A trace-mode spec loads its trace from disk
/// unless one is supplied.
template <class Observer>
  requires(!std::is_same_v<std::remove_cv_t<Observer>, ContactTrace>)
RunRecord run(const ScenarioSpec& spec, Observer& observer, std::optional<ContactTrace> trace = std::nullopt) {
  if (spec.trace && !trace) trace = load_trace(*spec.trace);
  return Engine<Observer>(spec, std::move(trace), observer).run();
}

inline RunRecord run(const ScenarioSpec& spec, std::optional<ContactTrace> trace = std::nullopt) {
  NullObserver none;
  return run(spec, none, std::move(trace));
}

}  // namespace gossim
