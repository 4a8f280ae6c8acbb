#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gossim/core.hpp"

namespace gossim {

/// The four dissemination protocols are one machine with two switches:
///
///              FP  --(+version in beacon)-->  PBP
///              |                               |
///        (+token number)                (+token number)
///              v                               v
///             FCP  --(+version in beacon)-->  GCP
struct ProtocolConfig {
  bool piggyback = false;
  bool token_control = false;
  std::uint32_t initial_tokens = 0;  // meaningful only with token_control

  static constexpr ProtocolConfig fp() { return {false, false, 0}; }
  static constexpr ProtocolConfig fcp(std::uint32_t tokens) { return {false, true, tokens}; }
  static constexpr ProtocolConfig pbp() { return {true, false, 0}; }
  static constexpr ProtocolConfig gcp(std::uint32_t tokens) { return {true, true, tokens}; }

  friend bool operator==(const ProtocolConfig&, const ProtocolConfig&) = default;
};

inline std::string_view protocol_name(const ProtocolConfig& c) {
  if (c.piggyback) return c.token_control ? "gcp" : "pbp";
  return c.token_control ? "fcp" : "fp";
}

/// Parses fp|fcp|pbp|gcp. Tokens are left for the caller to set.
inline std::optional<ProtocolConfig> protocol_from_name(std::string_view name) {
  if (name == "fp") return ProtocolConfig::fp();
  if (name == "fcp") return ProtocolConfig::fcp(0);
  if (name == "pbp") return ProtocolConfig::pbp();
  if (name == "gcp") return ProtocolConfig::gcp(0);
  return std::nullopt;
}

struct SendSoftware {
  Version version;
  friend bool operator==(const SendSoftware&, const SendSoftware&) = default;
};
struct SendBeacon {
  friend bool operator==(const SendBeacon&, const SendBeacon&) = default;
};
struct UpdateLocal {
  Version version;
  friend bool operator==(const UpdateLocal&, const UpdateLocal&) = default;
};

using ProtocolAction = std::variant<SendSoftware, SendBeacon, UpdateLocal>;

struct Transition {
  NodeState state;
  std::vector<ProtocolAction> actions;
};

/// Fresh node state for `cfg`: factory version, full budget if tokens are on.
inline NodeState initial_state(NodeId id, const ProtocolConfig& cfg) {
  NodeState s;
  s.id = id;
  if (cfg.token_control) s.tokens = TokenBudget(cfg.initial_tokens);
  return s;
}

/// Beacon reception. `remote_version` is present exactly when the run
/// piggybacks versions.
inline Transition on_beacon(NodeState state, const ProtocolConfig& cfg, std::optional<Version> remote_version) {
  require(remote_version.has_value() == cfg.piggyback, "on_beacon: remote version presence does not match piggyback flag");
  require(state.tokens.has_value() == cfg.token_control, "on_beacon: token budget does not match token_control flag");
  Transition out{state, {}};
  auto push_with_token = [&] {
    if (cfg.token_control) {
      if (state.tokens->exhausted()) return false;
      out.state.tokens = spend_token(*state.tokens);
    }
    out.actions.emplace_back(SendSoftware{state.version});
    return true;
  };

  if (!cfg.piggyback) {
    push_with_token();
    return out;
  }
  const Version remote = *remote_version;
  if (newer(state.version, remote) && push_with_token()) return out;
  // The pull request: the sender is still in range, so ask it right away.
  if (newer(remote, state.version)) out.actions.emplace_back(SendBeacon{});
  return out;
}

/// Software reception, including overheard copies meant for someone else.
inline Transition on_software(NodeState state, const ProtocolConfig& cfg, Version payload_version, bool digest_ok) {
  Transition out{state, {}};
  if (!digest_ok) {
    out.actions.emplace_back(SendBeacon{});
    return out;
  }
  if (newer(payload_version, state.version)) {
    out.state.version = payload_version;
    if (cfg.token_control) out.state.tokens = refill_tokens(*state.tokens);
    out.actions.emplace_back(UpdateLocal{payload_version});
  }
  return out;
}

inline Message make_beacon(const NodeState& state, const ProtocolConfig& cfg) {
  Message m;
  m.kind = MessageKind::Beacon;
  m.sender = state.id;
  if (cfg.piggyback) m.payload_version = state.version;
  return m;
}

}  // namespace gossim
