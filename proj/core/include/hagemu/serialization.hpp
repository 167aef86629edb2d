#pragma once

#include <string>

#include "hagemu/attack_graph.hpp"
#include "hagemu/building.hpp"
#include "hagemu/linear_model.hpp"
#include "hagemu/tile_coder.hpp"

namespace hagemu {

// Graph document: {"noop_reward": r, "nodes": [...], "edges": [...]} with
// nodes {id, kind, entry_point, actions[{label, magnitude, cost}]} and
// edges {from, to, reward, cost, prob: {"const": x} | {"named": name}}.
Hag load_hag(const std::string& path);
Hag parse_hag(const std::string& json_text);
std::string hag_to_json(const Hag& hag);
void save_hag(const Hag& hag, const std::string& path);

// Trained weights plus the tile-coding header needed to reuse them. The
// graph fingerprint (node/edge/action counts) guards against evaluating
// weights on a mismatched graph or grid.
struct WeightsArtifact {
  std::string algo;  // "adp" or "ac"
  TileCoderSpec spec;
  int num_nodes = 0;
  int num_edges = 0;
  int num_actions = 0;
  std::uint64_t seed = 0;
  long episodes = 0;
  ValueWeights theta;
  PreferenceWeights psi;  // empty for adp
};

void save_weights(const WeightsArtifact& artifact, const std::string& path);
WeightsArtifact load_weights(const std::string& path);

// Raises IncompatibleWeights unless the artifact matches the graph and
// tile spec it is about to be used with.
void check_compatible(const WeightsArtifact& artifact, const Hag& hag,
                      const TileCoderSpec& spec);

// Flat `key = value` TOML subset (comments and [section] headers are
// skipped). Unknown keys raise ParseError.
building::BuildingParams load_building_params(const std::string& path);

}  // namespace hagemu
