#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "gossim/core.hpp"
#include "gossim/rng.hpp"

namespace gossim {

struct RadioParams {
  double r = 3.0;      // always-received radius, metres
  double R = 5.0;      // maximum radius, metres
  double p_min = 0.3;  // reception probability at exactly R

  bool valid() const { return r > 0.0 && r < R && p_min > 0.0 && p_min <= 1.0; }
  friend bool operator==(const RadioParams&, const RadioParams&) = default;
};

/// Reception probability at separation `d`.
///
/// Inside r every transmission is heard, beyond R none is. In between the
/// probability falls from 1 at r to p_min at R along
///   p_min - sqrt(x) * (x - 5) * (1 - p_min) / 4,   x = (R - d) / (R - r).
/// Both d == r and d == R take the middle branch; it is continuous there.
inline double delivery_probability(double d, const RadioParams& p) {
  require(d >= 0.0, "delivery_probability: negative distance");
  if (d < p.r) return 1.0;
  if (d > p.R) return 0.0;
  const double x = (p.R - d) / (p.R - p.r);
  return p.p_min - std::sqrt(x) * (x - 5.0) * (1.0 - p.p_min) / 4.0;
}

namespace detail {

// Candidates must be visited in ascending id order so that grid and
// brute-force sampling consume the random stream identically.
inline void sample_from_candidates(NodeId sender, std::span<const Vec2> positions, std::span<const std::uint32_t> candidates,
                                   const RadioParams& p, RandomStream& rng, std::vector<NodeId>& out) {
  const Vec2 origin = positions[sender.index()];
  for (auto id : candidates) {
    if (id == sender.value) continue;
    const double d = distance(origin, positions[id]);
    if (d > p.R) continue;
    const double prob = delivery_probability(d, p);
    if (prob >= 1.0 || rng.bernoulli(prob)) out.push_back(NodeId{id});
  }
}

}  // namespace detail

/// Brute-force receiver sampling over all nodes. Each candidate within R is
/// kept independently with delivery_probability(d); the sender never hears
/// itself.
inline std::vector<NodeId> sample_receivers(NodeId sender, std::span<const Vec2> positions, const RadioParams& p,
                                            RandomStream& rng) {
  require(sender.index() < positions.size(), "sample_receivers: unknown sender");
  std::vector<std::uint32_t> all(positions.size());
  for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
  std::vector<NodeId> out;
  detail::sample_from_candidates(sender, positions, all, p, rng, out);
  return out;
}

/// Uniform hash grid over node positions with cell edge equal to the query
/// radius. A query looks at the 3x3 block of cells around a point, so every
/// node within one cell edge is returned (no false negatives); callers apply
/// the exact distance test.
class SpatialHashGrid {
 public:
  explicit SpatialHashGrid(double cell_size) : cell_size_(cell_size) {
    require(cell_size > 0.0, "SpatialHashGrid: cell size must be positive");
  }

  double cell_size() const { return cell_size_; }

  void rebuild(std::span<const Vec2> positions) {
    cells_.clear();
    node_cell_.assign(positions.size(), 0);
    for (std::uint32_t i = 0; i < positions.size(); ++i) {
      const auto key = key_of(positions[i]);
      node_cell_[i] = key;
      cells_[key].push_back(i);
    }
  }

  /// Moves node `id` to `pos`, touching the buckets only on a cell change.
  void update(NodeId id, Vec2 pos) {
    const auto key = key_of(pos);
    auto& current = node_cell_[id.index()];
    if (key == current) return;
    auto& bucket = cells_[current];
    bucket.erase(std::find(bucket.begin(), bucket.end(), id.value));
    if (bucket.empty()) cells_.erase(current);
    cells_[key].push_back(id.value);
    current = key;
  }

  /// Ids of all nodes in the 3x3 cell block around `pos`, ascending.
  void candidates(Vec2 pos, std::vector<std::uint32_t>& out) const {
    out.clear();
    const auto cx = cell_coord(pos.x);
    const auto cy = cell_coord(pos.y);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        const auto it = cells_.find(pack(cx + dx, cy + dy));
        if (it != cells_.end()) out.insert(out.end(), it->second.begin(), it->second.end());
      }
    }
    std::sort(out.begin(), out.end());
  }

 private:
  std::int64_t cell_coord(double v) const { return static_cast<std::int64_t>(std::floor(v / cell_size_)); }
  static std::uint64_t pack(std::int64_t cx, std::int64_t cy) {
    return (static_cast<std::uint64_t>(cx) << 32) ^ static_cast<std::uint32_t>(cy);
  }
  std::uint64_t key_of(Vec2 p) const { return pack(cell_coord(p.x), cell_coord(p.y)); }

  double cell_size_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells_;
  std::vector<std::uint64_t> node_cell_;
};

/// Grid-accelerated receiver sampling. Produces exactly the same set, and
/// consumes exactly the same random draws, as the brute-force overload.
/// The grid's cell size must be at least p.R.
inline std::vector<NodeId> sample_receivers(NodeId sender, std::span<const Vec2> positions, const SpatialHashGrid& grid,
                                            const RadioParams& p, RandomStream& rng,
                                            std::vector<std::uint32_t>& scratch) {
  require(sender.index() < positions.size(), "sample_receivers: unknown sender");
  require(grid.cell_size() >= p.R, "sample_receivers: grid cell smaller than R");
  grid.candidates(positions[sender.index()], scratch);
  std::vector<NodeId> out;
  detail::sample_from_candidates(sender, positions, scratch, p, rng, out);
  return out;
}

}  // namespace gossim
