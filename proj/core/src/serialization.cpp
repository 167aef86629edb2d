#include "hagemu/serialization.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hagemu {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::ParseError, "cannot open '" + path + "'");
  std::ostringstream oss;
  oss << in.rdbuf();
  return oss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) raise(ErrorCode::ParseError, "cannot write '" + path + "'");
  out << text;
}

json parse_json(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) raise(ErrorCode::ParseError, "malformed JSON in " + what);
  return j;
}

}  // namespace

Hag parse_hag(const std::string& json_text) {
  json doc = parse_json(json_text, "graph document");
  if (!doc.contains("nodes") || !doc.contains("edges"))
    raise(ErrorCode::ParseError, "graph document needs 'nodes' and 'edges' arrays");

  std::vector<Node> nodes;
  for (const json& jn : doc["nodes"]) {
    Node node;
    node.id = jn.at("id").get<int>();
    std::string kind = jn.value("kind", "cyber");
    if (kind == "cyber")
      node.kind = NodeKind::Cyber;
    else if (kind == "physical")
      node.kind = NodeKind::Physical;
    else
      raise(ErrorCode::ParseError, "node " + std::to_string(node.id) +
                                       ": kind must be 'cyber' or 'physical'");
    node.entry_point = jn.value("entry_point", false);
    if (jn.contains("actions"))
      for (const json& ja : jn["actions"])
        node.physical_actions.push_back({ja.value("label", ""),
                                         ja.at("magnitude").get<double>(),
                                         ja.value("cost", 0.0)});
    nodes.push_back(std::move(node));
  }

  std::vector<ExploitEdge> edges;
  for (const json& je : doc["edges"]) {
    ExploitEdge edge;
    edge.from = je.at("from").get<int>();
    edge.to = je.at("to").get<int>();
    edge.reward = je.value("reward", 0.0);
    edge.cost = je.value("cost", 0.0);
    const json& jp = je.at("prob");
    if (jp.contains("const"))
      edge.success_prob = SuccessProb::constant(jp["const"].get<double>());
    else if (jp.contains("named"))
      edge.success_prob = SuccessProb::named(jp["named"].get<std::string>());
    else
      raise(ErrorCode::ParseError, "edge prob needs 'const' or 'named'");
    edges.push_back(std::move(edge));
  }

  return Hag(std::move(nodes), std::move(edges), doc.value("noop_reward", 0.0));
}

Hag load_hag(const std::string& path) {
  try {
    return parse_hag(read_file(path));
  } catch (const HagError& e) {
    throw HagError(e.code(), path + ": " + e.what());
  }
}

std::string hag_to_json(const Hag& hag) {
  json doc;
  doc["noop_reward"] = hag.noop_reward();
  doc["nodes"] = json::array();
  for (const Node& node : hag.nodes()) {
    json jn;
    jn["id"] = node.id;
    jn["kind"] = node.kind == NodeKind::Cyber ? "cyber" : "physical";
    jn["entry_point"] = node.entry_point;
    jn["actions"] = json::array();
    for (const PhysicalActionSpec& a : node.physical_actions)
      jn["actions"].push_back({{"label", a.label},
                               {"magnitude", a.magnitude},
                               {"cost", a.cost}});
    doc["nodes"].push_back(std::move(jn));
  }
  doc["edges"] = json::array();
  for (const ExploitEdge& edge : hag.edges()) {
    json je;
    je["from"] = edge.from;
    je["to"] = edge.to;
    je["reward"] = edge.reward;
    je["cost"] = edge.cost;
    je["prob"] = edge.success_prob.is_named()
                     ? json{{"named", edge.success_prob.name()}}
                     : json{{"const", edge.success_prob.const_value()}};
    doc["edges"].push_back(std::move(je));
  }
  return doc.dump(2) + "\n";
}

void save_hag(const Hag& hag, const std::string& path) {
  write_file(path, hag_to_json(hag));
}

namespace {

json spec_to_json(const TileCoderSpec& spec) {
  json j;
  j["num_tilings"] = spec.num_tilings;
  j["tiles_per_dim"] = spec.tiles_per_dim;
  j["state_bounds"] = json::array();
  for (const auto& [lo, hi] : spec.state_bounds) j["state_bounds"].push_back({lo, hi});
  j["include_time"] = spec.include_time;
  j["horizon"] = spec.horizon;
  j["time_tiles"] = spec.time_tiles;
  j["hash_size"] = spec.hash_size;
  return j;
}

TileCoderSpec spec_from_json(const json& j) {
  TileCoderSpec spec;
  spec.num_tilings = j.at("num_tilings").get<int>();
  spec.tiles_per_dim = j.at("tiles_per_dim").get<std::vector<int>>();
  for (const json& b : j.at("state_bounds"))
    spec.state_bounds.emplace_back(b.at(0).get<double>(), b.at(1).get<double>());
  spec.include_time = j.at("include_time").get<bool>();
  spec.horizon = j.at("horizon").get<int>();
  spec.time_tiles = j.at("time_tiles").get<int>();
  spec.hash_size = j.at("hash_size").get<std::uint32_t>();
  return spec;
}

// Sparse encoding: arrays of [index, value] pairs in ascending index order,
// so equal weights always serialize to identical bytes.
json sparse_vector(const std::vector<double>& dense) {
  json arr = json::array();
  for (std::size_t i = 0; i < dense.size(); ++i)
    if (dense[i] != 0.0) arr.push_back({i, dense[i]});
  return arr;
}

}  // namespace

void save_weights(const WeightsArtifact& artifact, const std::string& path) {
  json doc;
  doc["format"] = "hagemu-weights-v1";
  doc["algo"] = artifact.algo;
  doc["tile_spec"] = spec_to_json(artifact.spec);
  doc["num_nodes"] = artifact.num_nodes;
  doc["num_edges"] = artifact.num_edges;
  doc["num_actions"] = artifact.num_actions;
  doc["seed"] = artifact.seed;
  doc["episodes"] = artifact.episodes;
  doc["theta"] = sparse_vector(artifact.theta.theta);
  if (artifact.algo == "ac") {
    json rows = json::array();
    for (int a = 0; a < artifact.psi.num_actions; ++a) {
      json row = json::array();
      for (std::uint32_t i = 0; i < artifact.psi.d; ++i) {
        double v = artifact.psi.at(a, i);
        if (v != 0.0) row.push_back({i, v});
      }
      rows.push_back(std::move(row));
    }
    doc["psi"] = std::move(rows);
  }
  write_file(path, doc.dump() + "\n");
}

WeightsArtifact load_weights(const std::string& path) {
  json doc = parse_json(read_file(path), path);
  if (doc.value("format", "") != "hagemu-weights-v1")
    raise(ErrorCode::ParseError, path + ": not a hagemu weights artifact");

  WeightsArtifact artifact;
  artifact.algo = doc.at("algo").get<std::string>();
  artifact.spec = spec_from_json(doc.at("tile_spec"));
  artifact.num_nodes = doc.at("num_nodes").get<int>();
  artifact.num_edges = doc.at("num_edges").get<int>();
  artifact.num_actions = doc.at("num_actions").get<int>();
  artifact.seed = doc.at("seed").get<std::uint64_t>();
  artifact.episodes = doc.at("episodes").get<long>();

  artifact.theta = ValueWeights(artifact.spec.hash_size);
  for (const json& pair : doc.at("theta"))
    artifact.theta.theta.at(pair.at(0).get<std::size_t>()) = pair.at(1).get<double>();

  if (artifact.algo == "ac") {
    artifact.psi = PreferenceWeights(artifact.num_actions, artifact.spec.hash_size);
    const json& rows = doc.at("psi");
    for (int a = 0; a < artifact.num_actions; ++a)
      for (const json& pair : rows.at(static_cast<std::size_t>(a)))
        artifact.psi.at(a, pair.at(0).get<std::uint32_t>()) = pair.at(1).get<double>();
  }
  return artifact;
}

void check_compatible(const WeightsArtifact& artifact, const Hag& hag,
                      const TileCoderSpec& spec) {
  if (artifact.num_nodes != hag.num_nodes() || artifact.num_edges != hag.num_edges() ||
      artifact.num_actions != hag.num_actions())
    raise(ErrorCode::IncompatibleWeights,
          "weights were trained on a different graph (nodes/edges/actions "
          "fingerprint mismatch)");
  if (!(artifact.spec == spec))
    raise(ErrorCode::IncompatibleWeights, "weights use a different tile-coding spec");
}

building::BuildingParams load_building_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::ParseError, "cannot open '" + path + "'");

  building::BuildingParams params;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv(line);
    auto trim = [](std::string_view s) {
      while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
      while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
      return s;
    };
    sv = trim(sv);
    if (sv.empty() || sv.front() == '#' || sv.front() == '[') continue;
    auto eq = sv.find('=');
    if (eq == std::string_view::npos)
      raise(ErrorCode::ParseError,
            path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    std::string key(trim(sv.substr(0, eq)));
    std::string value(trim(sv.substr(eq + 1)));
    // strip trailing comment
    auto hash = value.find('#');
    if (hash != std::string::npos) value = std::string(trim(value.substr(0, hash)));

    auto as_double = [&] { return std::stod(value); };
    if (key == "x_low") params.x_low = as_double();
    else if (key == "x_high") params.x_high = as_double();
    else if (key == "airflow_gain") params.airflow_gain = as_double();
    else if (key == "ambient_gain") params.ambient_gain = as_double();
    else if (key == "supply_heat") params.supply_heat = as_double();
    else if (key == "supply_cool") params.supply_cool = as_double();
    else if (key == "max_airflow") params.max_airflow = as_double();
    else if (key == "action_bound") params.action_bound = as_double();
    else if (key == "grid_step") params.grid_step = as_double();
    else if (key == "horizon") params.horizon = static_cast<int>(std::stol(value));
    else if (key == "feature_low") params.feature_low = as_double();
    else if (key == "feature_high") params.feature_high = as_double();
    else
      raise(ErrorCode::ParseError,
            path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  if (!(params.x_low < params.x_high))
    raise(ErrorCode::BadConfig, "x_low must be below x_high");
  if (params.horizon < 1) raise(ErrorCode::BadConfig, "horizon must be >= 1");
  return params;
}

}  // namespace hagemu
