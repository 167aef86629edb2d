#include "hagemu/tile_coder.hpp"

#include <algorithm>
#include <cmath>

namespace hagemu {

TileCoderSpec TileCoderSpec::for_scenario(const Hag& hag, const Scenario& scenario,
                                          int tiles, int tilings,
                                          std::uint32_t hash_size) {
  TileCoderSpec spec;
  spec.num_tilings = tilings;
  spec.hash_size = hash_size;
  const int slots = static_cast<int>(hag.physical_nodes().size());
  for (int p = 0; p < slots; ++p) {
    spec.state_bounds.emplace_back(scenario.state_lower(p), scenario.state_upper(p));
    spec.tiles_per_dim.push_back(tiles);
  }
  spec.include_time = true;
  spec.horizon = scenario.horizon();
  return spec;
}

namespace {

inline void fnv_mix(std::uint64_t& h, std::uint64_t v) {
  h ^= v;
  h *= 1099511628211ull;
}

}  // namespace

FeatureVec tile_features(const TileCoderSpec& spec, std::uint64_t security_mask,
                         const std::vector<double>& continuous, int t) {
  const int dims = spec.num_dims() + (spec.include_time ? 1 : 0);
  FeatureVec features;
  features.reserve(static_cast<std::size_t>(spec.num_tilings));

  for (int tiling = 0; tiling < spec.num_tilings; ++tiling) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a offset basis
    fnv_mix(h, static_cast<std::uint64_t>(tiling) + 1);
    fnv_mix(h, security_mask);

    for (int dim = 0; dim < dims; ++dim) {
      double value, lo, hi;
      int tiles;
      if (dim < spec.num_dims()) {
        value = dim < static_cast<int>(continuous.size())
                    ? continuous[static_cast<std::size_t>(dim)]
                    : 0.0;
        lo = spec.state_bounds[static_cast<std::size_t>(dim)].first;
        hi = spec.state_bounds[static_cast<std::size_t>(dim)].second;
        tiles = spec.tiles_per_dim[static_cast<std::size_t>(dim)];
      } else {
        value = static_cast<double>(t);
        lo = 0.0;
        hi = static_cast<double>(std::max(spec.horizon, 1));
        tiles = std::max(spec.time_tiles, 1);
      }
      double unit = hi > lo ? std::clamp((value - lo) / (hi - lo), 0.0, 1.0) : 0.0;
      // Asymmetric displacement: tiling i shifts dimension j by the odd
      // multiple (2j+1), the standard way to decorrelate tiling offsets.
      double offset =
          std::fmod(static_cast<double>(tiling) * (2.0 * dim + 1.0),
                    static_cast<double>(spec.num_tilings)) /
          static_cast<double>(spec.num_tilings);
      auto coord = static_cast<std::int64_t>(std::floor(unit * tiles + offset));
      fnv_mix(h, static_cast<std::uint64_t>(coord + 1));
    }
    features.push_back(static_cast<std::uint32_t>(h % spec.hash_size));
  }
  return features;
}

}  // namespace hagemu
