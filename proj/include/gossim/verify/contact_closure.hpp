#pragma once

// Connectivity certificate for flooding, computed from node trajectories
// alone (no protocol or radio sampling involved).
//
// If two nodes stay strictly closer than r for beacon_period - 1 + latency
// consecutive ticks starting no earlier than the moment i holds the update,
// then j beacons inside that window, i hears it with certainty and floods
// back, and j certainly hears the reply. So under FP, j is updated no later
// than the end of the window plus one latency. Chaining this from the
// injected node gives an upper bound on every reachable node's update time.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <unordered_map>
#include <vector>

#include "gossim/engine.hpp"

namespace gossim::verify {

inline constexpr Millis kNever = std::numeric_limits<Millis>::max();

struct ClosureParams {
  double r = 3.0;
  Millis beacon_period = 100;
  Millis latency = 1;
  Millis duration = 50'000;
};

class ContactClosureObserver {
 public:
  ContactClosureObserver(std::size_t nodes, ClosureParams p) : p_(p), bound_(nodes, kNever), order_(nodes) {
    std::iota(order_.begin(), order_.end(), 0u);
  }

  void on_input(Millis t, NodeId n, const ProtocolInput& in) {
    if (in.kind == ProtocolInput::Kind::Inject) bound_[n.index()] = std::min(bound_[n.index()], t);
  }

  void on_tick(Millis t, std::span<const Vec2> pos) {
    std::sort(order_.begin(), order_.end(), [&](std::uint32_t a, std::uint32_t b) {
      return pos[a].x != pos[b].x ? pos[a].x < pos[b].x : a < b;
    });
    next_.clear();
    const double r2 = p_.r * p_.r;
    for (std::size_t u = 0; u < order_.size(); ++u) {
      const auto i = order_[u];
      for (std::size_t w = u + 1; w < order_.size(); ++w) {
        const auto j = order_[w];
        const double dx = pos[j].x - pos[i].x;
        if (dx >= p_.r) break;
        const double dy = pos[j].y - pos[i].y;
        if (dx * dx + dy * dy >= r2) continue;
        const auto key = pair_key(i, j);
        const auto it = open_.find(key);
        const Millis start = it == open_.end() ? t : it->second;
        next_.emplace(key, start);
        relax(i, j, start, t);
        relax(j, i, start, t);
      }
    }
    open_.swap(next_);
  }

  /// Certified latest update time per node; kNever where no certificate.
  const std::vector<Millis>& bounds() const { return bound_; }

 private:
  static std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
    if (b < a) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  }

  void relax(std::uint32_t from, std::uint32_t to, Millis start, Millis t) {
    if (bound_[from] == kNever) return;
    const Millis a = std::max(start, bound_[from]);
    if (t >= a + p_.beacon_period - 1 + p_.latency && t + p_.latency <= p_.duration)
      bound_[to] = std::min(bound_[to], t + p_.latency);
  }

  ClosureParams p_;
  std::vector<Millis> bound_;
  std::vector<std::uint32_t> order_;
  std::unordered_map<std::uint64_t, Millis> open_;
  std::unordered_map<std::uint64_t, Millis> next_;
};

/// Same certificate for a contact trace, where every contact delivers with
/// certainty.
inline std::vector<Millis> trace_closure(const ContactTrace& trace, NodeId injected, Millis injection_time, ClosureParams p) {
  std::vector<Millis> bound(std::max<std::size_t>(trace.node_count(), 1), kNever);
  bound[injected.index()] = injection_time;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& c : trace.contacts()) {
      for (const auto& [from, to] : {std::pair{c.a, c.b}, std::pair{c.b, c.a}}) {
        if (bound[from.index()] == kNever) continue;
        const Millis a = std::max(c.t_start, bound[from.index()]);
        const Millis last = a + p.beacon_period - 1 + p.latency;
        const Millis done = last + p.latency;
        if (last <= c.t_end - 1 && done <= p.duration && done < bound[to.index()]) {
          bound[to.index()] = done;
          changed = true;
        }
      }
    }
  }
  return bound;
}

inline bool certifies_all(const std::vector<Millis>& bound) {
  return std::all_of(bound.begin(), bound.end(), [](Millis b) { return b != kNever; });
}

}  // namespace gossim::verify
