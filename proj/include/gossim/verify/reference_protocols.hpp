#pragma once

// Line-by-line transcriptions of the published pseudo-code, one function per
// protocol, kept deliberately separate from the parametric machine in
// protocols.hpp so each can be checked against the other.

#include <cstdint>
#include <optional>
#include <vector>

#include "gossim/protocols.hpp"

namespace gossim::reference {

struct Node {
  std::uint32_t version = 0;
  std::int64_t token = 0;
  std::int64_t initial_number_of_tokens = 0;
};

using Actions = std::vector<ProtocolAction>;

// Flooding.
inline Actions fp_receive_beacon(Node& n) {
  return {SendSoftware{Version{n.version}}};
}
inline Actions fp_receive_software(Node& n, std::uint32_t version_r) {
  if (version_r > n.version) {
    n.version = version_r;
    return {UpdateLocal{Version{version_r}}};
  }
  return {};
}

// Gossip-based code propagation.
inline Actions gcp_receive_beacon(Node& n, std::uint32_t version_r) {
  Actions out;
  if (version_r < n.version && n.token > 0) {  // lines 1-2
    out.push_back(SendSoftware{Version{n.version}});  // 3
    n.token = n.token - 1;  // 4
  } else {  // 5
    if (version_r > n.version) {  // 6
      out.push_back(SendBeacon{});  // 7
    }  // 8
  }
  return out;
}
inline Actions gcp_receive_software(Node& n, std::uint32_t version_r) {
  if (version_r > n.version) {
    n.version = version_r;
    n.token = n.initial_number_of_tokens;
    return {UpdateLocal{Version{version_r}}};
  }
  return {};
}

// Piggy-backing only: GCP without lines 2 and 5 of ReceiveBeacon and
// without the token reset in ReceiveSoftware.
inline Actions pbp_receive_beacon(Node& n, std::uint32_t version_r) {
  Actions out;
  if (version_r < n.version) {
    out.push_back(SendSoftware{Version{n.version}});
    n.token = n.token - 1;
  }
  if (version_r > n.version) {
    out.push_back(SendBeacon{});
  }
  return out;
}
inline Actions pbp_receive_software(Node& n, std::uint32_t version_r) {
  if (version_r > n.version) {
    n.version = version_r;
    return {UpdateLocal{Version{version_r}}};
  }
  return {};
}

// Forwarding control only: GCP without lines 1, 6, 7 and 8 of ReceiveBeacon.
inline Actions fcp_receive_beacon(Node& n) {
  Actions out;
  if (n.token > 0) {
    out.push_back(SendSoftware{Version{n.version}});
    n.token = n.token - 1;
  }
  return out;
}
inline Actions fcp_receive_software(Node& n, std::uint32_t version_r) { return gcp_receive_software(n, version_r); }

enum class Protocol { FP, FCP, PBP, GCP };

/// Dispatches a beacon to the transcription for `p`. The remote version is
/// ignored by the protocols that do not piggy-back.
inline Actions receive_beacon(Protocol p, Node& n, std::optional<std::uint32_t> version_r) {
  switch (p) {
    case Protocol::FP: return fp_receive_beacon(n);
    case Protocol::FCP: return fcp_receive_beacon(n);
    case Protocol::PBP: return pbp_receive_beacon(n, version_r.value());
    case Protocol::GCP: return gcp_receive_beacon(n, version_r.value());
  }
  return {};
}

/// A copy failing its digest check is discarded and re-requested with a
/// beacon, whatever the protocol.
inline Actions receive_software(Protocol p, Node& n, std::uint32_t version_r, bool digest_ok) {
  if (!digest_ok) return {SendBeacon{}};
  switch (p) {
    case Protocol::FP: return fp_receive_software(n, version_r);
    case Protocol::FCP: return fcp_receive_software(n, version_r);
    case Protocol::PBP: return pbp_receive_software(n, version_r);
    case Protocol::GCP: return gcp_receive_software(n, version_r);
  }
  return {};
}

}  // namespace gossim::reference
