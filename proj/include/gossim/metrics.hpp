#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gossim/core.hpp"
#include "gossim/record.hpp"

namespace gossim {

class MetricsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SeriesPoint {
  Millis t = 0;
  std::size_t count = 0;
  friend bool operator==(const SeriesPoint&, const SeriesPoint&) = default;
};

/// Step function of how many nodes hold at least a given version.
struct ConvergenceSeries {
  std::vector<SeriesPoint> points;
  std::size_t node_count = 0;

  std::size_t final_count() const { return points.empty() ? 0 : points.back().count; }
};

/// Starts at (0, 0), gains one point per instant the count changes and ends
/// at (duration, final count).
inline ConvergenceSeries convergence_series(const RunRecord& rec, Version version) {
  if (version != rec.injected_version) throw MetricsError("convergence_series: version was not injected in this run");
  ConvergenceSeries s;
  s.node_count = rec.node_count;
  s.points.push_back({0, 0});
  std::vector<Version> held(rec.node_count);
  std::size_t count = 0;
  for (const auto& u : rec.update_events) {
    auto& h = held[u.node.index()];
    const bool had = h >= version;
    if (u.version > h) h = u.version;
    if (!had && h >= version) {
      ++count;
      if (s.points.back().t == u.t) s.points.back().count = count;
      else s.points.push_back({u.t, count});
    }
  }
  if (s.points.back().t == rec.duration) s.points.back().count = count;
  else s.points.push_back({rec.duration, count});
  return s;
}

/// First instant the series reaches fraction * node_count, if ever.
inline std::optional<Millis> time_to_fraction(const ConvergenceSeries& s, double fraction) {
  require(fraction > 0.0 && fraction <= 1.0, "time_to_fraction: fraction must be in (0, 1]");
  const double target = fraction * static_cast<double>(s.node_count);
  for (const auto& p : s.points) {
    if (static_cast<double>(p.count) >= target) return p.t;
  }
  return std::nullopt;
}

/// sends -> number of nodes that sent the software exactly that many times.
inline std::map<std::uint64_t, std::size_t> load_histogram(const RunRecord& rec) {
  std::map<std::uint64_t, std::size_t> h;
  for (std::uint32_t i = 0; i < rec.node_count; ++i) ++h[software_sends_of(rec, NodeId{i})];
  return h;
}

struct TheoreticalParams {
  double upgrades = 1;           // n_v
  double tokens = 1;             // t
  double neighbourhood = 1;      // n_nh, mean neighbourhood size
  double duration = 50'000;      // d, ms
  double beacon_period = 100;    // p_b, ms
  double network_size = 1;       // n_s

  bool valid() const {
    return upgrades >= 0 && tokens >= 0 && neighbourhood >= 0 && duration > 0 && beacon_period > 0 && network_size >= 1;
  }
};

// Upper-bound averages of software sends per node over a deployment.
inline double bound_flooding(const TheoreticalParams& p) { return p.duration / p.beacon_period * p.neighbourhood; }
inline double bound_fcp(const TheoreticalParams& p) { return (p.upgrades + 1) * p.tokens; }
inline double bound_pbp(const TheoreticalParams& p) { return p.upgrades * (p.network_size - 1); }
inline double bound_gcp(const TheoreticalParams& p) { return p.upgrades * p.tokens; }

/// Probability that every node receives a gossip broadcast when each member
/// forwards to log(n) + c others: exp(-exp(-c)).
inline double gossip_reliability(double c) { return std::exp(-std::exp(-c)); }

/// Percentage of software messages saved relative to a flooding run of the
/// same workload and seed.
inline double savings(const RunRecord& alg, const RunRecord& flooding) {
  if (alg.fingerprint != flooding.fingerprint || alg.seed != flooding.seed)
    throw MetricsError("savings: runs are not on the same scenario and seed");
  const auto base = total_software_sends(flooding);
  if (base == 0) throw MetricsError("savings: flooding run sent no software");
  return 100.0 * (1.0 - static_cast<double>(total_software_sends(alg)) / static_cast<double>(base));
}

/// Bound parameters for one upgrade, with n_nh measured from the run itself.
inline TheoreticalParams theoretical_params(const RunRecord& rec) {
  TheoreticalParams p;
  p.upgrades = 1;
  p.tokens = rec.tokens;
  p.neighbourhood = mean_neighbourhood(rec);
  p.duration = static_cast<double>(rec.duration);
  p.beacon_period = static_cast<double>(rec.beacon_period);
  p.network_size = static_cast<double>(rec.node_count);
  return p;
}

}  // namespace gossim
