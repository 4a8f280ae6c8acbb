#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "gossim/core.hpp"
#include "gossim/rng.hpp"

namespace gossim {

struct AreaRect {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  bool valid() const { return x_min < x_max && y_min < y_max; }
  bool contains(Vec2 p) const { return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max; }
  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  friend bool operator==(const AreaRect&, const AreaRect&) = default;
};

struct MobilityParams {
  Millis pause_max = 100;
  Millis leg_duration_min = 100;
  Millis leg_duration_max = 500;
  double speed_min = 0.8;  // m/s
  double speed_max = 2.0;

  bool valid() const {
    return pause_max >= 0 && leg_duration_min > 0 && leg_duration_min <= leg_duration_max && speed_min > 0.0 &&
           speed_min <= speed_max;
  }
  friend bool operator==(const MobilityParams&, const MobilityParams&) = default;
};

inline constexpr Millis kTick = 1;

/// Specular reflection of a step that left `area`: the crossed axis's
/// coordinate is mirrored back across the border and the matching direction
/// component flips. A corner hit flips both.
inline std::pair<Vec2, Vec2> bounce(Vec2 position, Vec2 direction, const AreaRect& area) {
  // A single step is far shorter than any area edge, but loop anyway so
  // degenerate tiny areas still end up inside.
  for (int guard = 0; guard < 64 && !area.contains(position); ++guard) {
    if (position.x > area.x_max) {
      position.x = 2.0 * area.x_max - position.x;
      direction.x = -direction.x;
    } else if (position.x < area.x_min) {
      position.x = 2.0 * area.x_min - position.x;
      direction.x = -direction.x;
    }
    if (position.y > area.y_max) {
      position.y = 2.0 * area.y_max - position.y;
      direction.y = -direction.y;
    } else if (position.y < area.y_min) {
      position.y = 2.0 * area.y_min - position.y;
      direction.y = -direction.y;
    }
  }
  position.x = std::clamp(position.x, area.x_min, area.x_max);
  position.y = std::clamp(position.y, area.y_min, area.y_max);
  return {position, direction};
}

inline void start_leg(Motion& m, Millis from, const MobilityParams& mp, RandomStream& rng) {
  const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
  m.moving = true;
  m.direction = {std::cos(angle), std::sin(angle)};
  m.leg_end = from + rng.uniform_int(mp.leg_duration_min, mp.leg_duration_max);
  m.speed = rng.uniform(mp.speed_min, mp.speed_max);
}

/// One simulator tick, covering the interval (now - 1, now].
///
/// A paused node stays put while now <= pause_until and starts a fresh leg
/// on the first tick after. A moving node steps speed * 1 ms along its
/// direction, bouncing off the area border, and starts a pause of
/// U{0..pause_max} ms once the leg's end time is reached.
inline void advance_in_place(NodeState& s, Millis now, const AreaRect& area, const MobilityParams& mp, RandomStream& rng) {
  auto& m = s.motion;
  if (!m.moving) {
    if (now <= m.pause_until) return;
    start_leg(m, now - kTick, mp, rng);
  }
  const Vec2 step = m.direction * (m.speed * static_cast<double>(kTick) / 1000.0);
  Vec2 next = s.position + step;
  if (!area.contains(next)) std::tie(next, m.direction) = bounce(next, m.direction, area);
  s.position = next;
  if (now >= m.leg_end) {
    m.moving = false;
    m.pause_until = now + rng.uniform_int(0, mp.pause_max);
  }
}

inline NodeState advance(NodeState state, Millis now, const AreaRect& area, const MobilityParams& mp, RandomStream& rng) {
  require(area.contains(state.position), "advance: node outside its area");
  advance_in_place(state, now, area, mp, rng);
  return state;
}

/// Half-open interval [t_start, t_end) during which a and b hear each other.
struct Contact {
  Millis t_start = 0;
  Millis t_end = 0;
  NodeId a;
  NodeId b;

  friend bool operator==(const Contact&, const Contact&) = default;
};

class TraceError : public std::runtime_error {
 public:
  TraceError(std::size_t line, const std::string& what)
      : std::runtime_error("trace line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

using NodePair = std::pair<NodeId, NodeId>;

class ContactTrace {
 public:
  ContactTrace() = default;

  /// Validates and sorts by t_start. Pairs are normalized to (min, max).
  explicit ContactTrace(std::vector<Contact> contacts) : contacts_(std::move(contacts)) {
    for (auto& c : contacts_) {
      if (c.t_end <= c.t_start) throw TraceError(0, "t_end must be greater than t_start");
      if (c.t_start < 0) throw TraceError(0, "negative time");
      if (c.a == c.b) throw TraceError(0, "self contact");
      if (c.b < c.a) std::swap(c.a, c.b);
    }
    finish();
  }

  /// Reads the `t_start_ms,t_end_ms,node_a,node_b` CSV format.
  static ContactTrace from_csv(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    std::vector<Contact> contacts;
    bool header_seen = false;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (!header_seen) {
        if (line != "t_start_ms,t_end_ms,node_a,node_b") throw TraceError(lineno, "expected header t_start_ms,t_end_ms,node_a,node_b");
        header_seen = true;
        continue;
      }
      std::uint64_t fields[4]{};
      std::string_view rest = line;
      for (int i = 0; i < 4; ++i) {
        const auto comma = rest.find(',');
        const auto tok = rest.substr(0, comma);
        const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), fields[i]);
        if (ec != std::errc{} || ptr != tok.data() + tok.size() || tok.empty())
          throw TraceError(lineno, "field " + std::to_string(i + 1) + " is not a non-negative integer");
        if ((i < 3) != (comma != std::string_view::npos)) throw TraceError(lineno, "expected exactly 4 fields");
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      }
      Contact c{static_cast<Millis>(fields[0]), static_cast<Millis>(fields[1]), NodeId{static_cast<std::uint32_t>(fields[2])},
                NodeId{static_cast<std::uint32_t>(fields[3])}};
      if (c.t_end <= c.t_start) throw TraceError(lineno, "t_end must be greater than t_start");
      if (c.a == c.b) throw TraceError(lineno, "self contact");
      if (c.b < c.a) std::swap(c.a, c.b);
      contacts.push_back(c);
    }
    if (!header_seen) throw TraceError(lineno, "empty trace");
    ContactTrace trace;
    trace.contacts_ = std::move(contacts);
    trace.finish();
    return trace;
  }

  const std::vector<Contact>& contacts() const { return contacts_; }

  /// 1 + the largest node id mentioned.
  std::size_t node_count() const { return node_count_; }

  /// All pairs whose interval contains t, as (min, max), ascending.
  std::vector<NodePair> contacts_at(Millis t) const {
    std::vector<NodePair> out;
    for (const auto& c : contacts_) {
      if (c.t_start > t) break;
      if (t < c.t_end) out.emplace_back(c.a, c.b);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// Nodes in contact with `n` at t, ascending.
  std::vector<NodeId> neighbours_at(NodeId n, Millis t) const {
    std::vector<NodeId> out;
    if (n.index() >= by_node_.size()) return out;
    for (auto idx : by_node_[n.index()]) {
      const auto& c = contacts_[idx];
      if (c.t_start > t) break;
      if (t < c.t_end) out.push_back(c.a == n ? c.b : c.a);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  void finish() {
    std::stable_sort(contacts_.begin(), contacts_.end(), [](const Contact& x, const Contact& y) {
      return x.t_start < y.t_start;
    });
    node_count_ = 0;
    for (const auto& c : contacts_) node_count_ = std::max<std::size_t>(node_count_, c.b.index() + 1);
    // Intervals of the same pair must not overlap.
    std::vector<std::size_t> order(contacts_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
      const auto& x = contacts_[i];
      const auto& y = contacts_[j];
      return std::tie(x.a, x.b, x.t_start) < std::tie(y.a, y.b, y.t_start);
    });
    for (std::size_t k = 1; k < order.size(); ++k) {
      const auto& prev = contacts_[order[k - 1]];
      const auto& cur = contacts_[order[k]];
      if (prev.a == cur.a && prev.b == cur.b && cur.t_start < prev.t_end)
        throw TraceError(0, "overlapping intervals for pair " + std::to_string(cur.a.value) + "," + std::to_string(cur.b.value));
    }
    by_node_.assign(node_count_, {});
    for (std::size_t i = 0; i < contacts_.size(); ++i) {
      by_node_[contacts_[i].a.index()].push_back(i);
      by_node_[contacts_[i].b.index()].push_back(i);
    }
  }

  std::vector<Contact> contacts_;
  std::vector<std::vector<std::size_t>> by_node_;
  std::size_t node_count_ = 0;
};

inline std::vector<NodePair> contacts_at(const ContactTrace& trace, Millis t) { return trace.contacts_at(t); }

}  // namespace gossim
