#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "gossim/core.hpp"

namespace gossim {

struct UpdateEvent {
  Millis t = 0;
  NodeId node;
  Version version;
  friend bool operator==(const UpdateEvent&, const UpdateEvent&) = default;
};

struct VersionCount {
  Version version;
  std::uint64_t count = 0;
  friend bool operator==(const VersionCount&, const VersionCount&) = default;
};

struct MessageTally {
  std::uint64_t periodic_beacons = 0;
  std::uint64_t pull_beacons = 0;
  std::uint64_t beacon_receptions = 0;
  std::uint64_t software_transmissions = 0;
  std::uint64_t software_receptions = 0;
  std::uint64_t digest_failures = 0;
  // Sum of receiver-set sizes over periodic beacons, for the mean
  // neighbourhood size.
  std::uint64_t periodic_beacon_receivers = 0;
  friend bool operator==(const MessageTally&, const MessageTally&) = default;
};

/// Everything a run produced. Immutable once the engine returns it.
struct RunRecord {
  std::string scenario;
  std::string protocol;
  std::uint32_t tokens = 0;
  std::uint64_t fingerprint = 0;
  std::uint64_t seed = 0;
  std::size_t node_count = 0;
  Millis duration = 0;
  Millis beacon_period = 0;
  Millis injection_time = 0;
  Version injected_version;
  NodeId injected_node;

  std::vector<UpdateEvent> update_events;  // sorted by t
  std::vector<std::vector<VersionCount>> software_sends;  // per node, by version
  std::vector<std::uint64_t> beacon_sends;  // per node, periodic + pull
  MessageTally tally;
  std::vector<std::pair<std::string, std::string>> metadata;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

inline std::uint64_t software_sends_of(const RunRecord& rec, NodeId n) {
  std::uint64_t total = 0;
  for (const auto& vc : rec.software_sends[n.index()]) total += vc.count;
  return total;
}

inline std::uint64_t total_software_sends(const RunRecord& rec) {
  std::uint64_t total = 0;
  for (std::uint32_t i = 0; i < rec.software_sends.size(); ++i) total += software_sends_of(rec, NodeId{i});
  return total;
}

/// Mean receiver-set size over all periodic beacons.
inline double mean_neighbourhood(const RunRecord& rec) {
  if (rec.tally.periodic_beacons == 0) return 0.0;
  return static_cast<double>(rec.tally.periodic_beacon_receivers) / static_cast<double>(rec.tally.periodic_beacons);
}

}  // namespace gossim
