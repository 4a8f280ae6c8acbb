#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace gossim {

/// Simulation time in milliseconds. The simulator clock advances in 1 ms ticks.
using Millis = std::int64_t;

/// Thrown when a caller breaks a documented precondition. These indicate a
/// simulator bug rather than a protocol event, so nothing should catch them
/// except test harnesses.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline void require(bool condition, const char* what) {
  if (!condition) throw ContractViolation(what);
}

struct NodeId {
  std::uint32_t value = 0;

  constexpr std::size_t index() const { return value; }
  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

/// Software version. 0 is the factory image every node boots with.
struct Version {
  std::uint32_t value = 0;

  friend constexpr auto operator<=>(Version, Version) = default;
};

constexpr bool newer(Version a, Version b) { return a.value > b.value; }

/// Per-version forwarding budget. Only the budget of the currently held
/// version is ever live, so a node keeps a single instance.
class TokenBudget {
 public:
  explicit constexpr TokenBudget(std::uint32_t initial) : remaining_(initial), initial_(initial) {
    if (initial == 0) throw ContractViolation("token budget must be positive");
  }
  constexpr TokenBudget(std::uint32_t remaining, std::uint32_t initial) : remaining_(remaining), initial_(initial) {
    if (initial == 0) throw ContractViolation("token budget must be positive");
    if (remaining > initial) throw ContractViolation("remaining tokens exceed initial budget");
  }

  constexpr std::uint32_t remaining() const { return remaining_; }
  constexpr std::uint32_t initial() const { return initial_; }
  constexpr bool exhausted() const { return remaining_ == 0; }

  friend constexpr bool operator==(const TokenBudget&, const TokenBudget&) = default;

 private:
  std::uint32_t remaining_;
  std::uint32_t initial_;
};

inline TokenBudget spend_token(TokenBudget t) {
  if (t.exhausted()) throw ContractViolation("spend_token called with no tokens left");
  return TokenBudget(t.remaining() - 1, t.initial());
}

constexpr TokenBudget refill_tokens(TokenBudget t) { return TokenBudget(t.initial(), t.initial()); }

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

inline double distance(Vec2 a, Vec2 b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

/// SHA-256 of the software image. Width is fixed at 32 bytes.
using Digest = std::array<std::uint8_t, 32>;

enum class MessageKind : std::uint8_t { Beacon, Software };

struct Message {
  MessageKind kind = MessageKind::Beacon;
  NodeId sender;
  // Beacons carry it only when piggy-backing; software always does.
  std::optional<Version> payload_version;
  std::optional<Digest> payload_digest;

  friend bool operator==(const Message&, const Message&) = default;
};

/// Random-waypoint leg state. A node is either walking a leg until
/// `leg_end` or pausing until `pause_until`.
struct Motion {
  bool moving = false;
  Vec2 direction{1.0, 0.0};
  double speed = 0.0;  // m/s
  Millis leg_end = 0;
  Millis pause_until = 0;

  friend bool operator==(const Motion&, const Motion&) = default;
};

struct NodeState {
  NodeId id;
  Version version;
  // Absent unless the protocol runs forwarding control.
  std::optional<TokenBudget> tokens;
  Vec2 position;
  Motion motion;
  Millis next_beacon_at = 0;

  friend bool operator==(const NodeState&, const NodeState&) = default;
};

}  // namespace gossim
