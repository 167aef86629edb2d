#pragma once

#include <cstdint>
#include <vector>

#include "hagemu/environment.hpp"

namespace hagemu {

// Sparse tile-coded features over the hybrid state. Each of the
// num_tilings overlapping grids contributes exactly one active index, so a
// state always activates num_tilings features.
//
// Continuous dimensions are the physical states, plus the time index when
// include_time is set (value and policy functions are time-indexed; folding
// t into the features realizes that with a single weight vector). The
// security mask is hashed into every tile, so distinct masks map to
// disjoint feature sets up to hash collisions.
struct TileCoderSpec {
  int num_tilings = 8;
  std::vector<int> tiles_per_dim;                    // one entry per continuous dim
  std::vector<std::pair<double, double>> state_bounds;  // [low, high] per dim
  bool include_time = false;
  int horizon = 0;            // time-dimension range when include_time
  int time_tiles = 8;
  std::uint32_t hash_size = 1u << 15;  // feature-vector length d

  // Uniform-resolution spec covering the scenario's physical slots (+time).
  static TileCoderSpec for_scenario(const Hag& hag, const Scenario& scenario,
                                    int tiles = 8, int tilings = 8,
                                    std::uint32_t hash_size = 1u << 15);

  int num_dims() const { return static_cast<int>(state_bounds.size()); }

  friend bool operator==(const TileCoderSpec& a, const TileCoderSpec& b) {
    return a.num_tilings == b.num_tilings && a.tiles_per_dim == b.tiles_per_dim &&
           a.state_bounds == b.state_bounds && a.include_time == b.include_time &&
           a.horizon == b.horizon && a.time_tiles == b.time_tiles &&
           a.hash_size == b.hash_size;
  }
};

using FeatureVec = std::vector<std::uint32_t>;

// Active indices for (mask, continuous values, t). Out-of-bounds values are
// clamped to the declared bounds.
FeatureVec tile_features(const TileCoderSpec& spec, std::uint64_t security_mask,
                         const std::vector<double>& continuous, int t);

inline FeatureVec tile_features(const TileCoderSpec& spec, const SystemState& s) {
  return tile_features(spec, s.security_mask(), s.physical, s.t);
}

}  // namespace hagemu
