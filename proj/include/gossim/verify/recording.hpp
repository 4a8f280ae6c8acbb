#pragma once

#include <vector>

#include "gossim/engine.hpp"
#include "gossim/verify/reference_protocols.hpp"

namespace gossim::verify {

/// One protocol-machine step observed during a run: the input and the
/// actions it produced. Injections have no actions.
struct Step {
  Millis t = 0;
  ProtocolInput input;
  std::vector<ProtocolAction> actions;
  friend bool operator==(const Step&, const Step&) = default;
};

/// Engine observer capturing every node's input/action log.
class RecordingObserver {
 public:
  explicit RecordingObserver(std::size_t nodes) : log_(nodes) {}

  void on_input(Millis t, NodeId n, const ProtocolInput& in) { log_[n.index()].push_back({t, in, {}}); }
  void on_actions(Millis, NodeId n, std::span<const ProtocolAction> actions) {
    log_[n.index()].back().actions.assign(actions.begin(), actions.end());
  }

  const std::vector<std::vector<Step>>& log() const { return log_; }

 private:
  std::vector<std::vector<Step>> log_;
};

struct ReplayMismatch {
  NodeId node;
  std::size_t step = 0;
};

/// Feeds every node's recorded inputs through the reference transcription
/// of `p` and compares the actions step by step. Returns the first
/// divergence, if any.
inline std::optional<ReplayMismatch> replay_against_reference(const std::vector<std::vector<Step>>& log,
                                                              reference::Protocol p, std::uint32_t initial_tokens) {
  for (std::uint32_t id = 0; id < log.size(); ++id) {
    reference::Node node{0, initial_tokens, initial_tokens};
    for (std::size_t k = 0; k < log[id].size(); ++k) {
      const auto& step = log[id][k];
      reference::Actions expected;
      switch (step.input.kind) {
        case ProtocolInput::Kind::Inject:
          if (step.input.payload_version.value > node.version) {
            node.version = step.input.payload_version.value;
            node.token = node.initial_number_of_tokens;
          }
          break;
        case ProtocolInput::Kind::Beacon: {
          std::optional<std::uint32_t> remote;
          if (step.input.remote_version) remote = step.input.remote_version->value;
          expected = reference::receive_beacon(p, node, remote);
          break;
        }
        case ProtocolInput::Kind::Software:
          expected = reference::receive_software(p, node, step.input.payload_version.value, step.input.digest_ok);
          break;
      }
      if (expected != step.actions) return ReplayMismatch{NodeId{id}, k};
    }
  }
  return std::nullopt;
}

}  // namespace gossim::verify
