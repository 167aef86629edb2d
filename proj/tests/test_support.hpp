// Shared fixtures: canonical graphs from small examples, a random DAG
// generator for property tests, and path helpers.
#pragma once

#include <string>
#include <vector>

#include "hagemu/attack_graph.hpp"
#include "hagemu/rng.hpp"

#ifndef HAGEMU_DATA_DIR
#define HAGEMU_DATA_DIR "data"
#endif

namespace hagemu::test {

inline std::string data_path(const std::string& name) {
  return std::string(HAGEMU_DATA_DIR) + "/" + name;
}

// Seven-node example graph: cyber 1..5 (1 is the entry), physical sinks 6, 7.
inline Hag fig1_graph(double prob = 0.8) {
  std::vector<Node> nodes;
  for (NodeId id = 1; id <= 5; ++id) nodes.push_back({id, NodeKind::Cyber, id == 1, {}});
  nodes.push_back({6, NodeKind::Physical, false, {}});
  nodes.push_back({7, NodeKind::Physical, false, {}});
  auto edge = [&](NodeId from, NodeId to) {
    return ExploitEdge{from, to, 1.0, 0.1, SuccessProb::constant(prob)};
  };
  std::vector<ExploitEdge> edges = {edge(1, 2), edge(1, 3), edge(2, 3), edge(3, 5),
                                    edge(5, 4), edge(4, 6), edge(5, 7)};
  return Hag(std::move(nodes), std::move(edges));
}

// Three-node chain 1 -> 2 -> 3 with a sink physical root and no physical
// actions; the enumerable sub-MDP used against the DP oracle.
inline Hag chain_graph(double p12 = 1.0, double p23 = 1.0, double reward = 1.0,
                       double cost = 0.1) {
  std::vector<Node> nodes = {{1, NodeKind::Cyber, true, {}},
                             {2, NodeKind::Cyber, false, {}},
                             {3, NodeKind::Physical, false, {}}};
  std::vector<ExploitEdge> edges = {
      {1, 2, reward, cost, SuccessProb::constant(p12)},
      {2, 3, reward, cost, SuccessProb::constant(p23)},
  };
  return Hag(std::move(nodes), std::move(edges));
}

// Two deterministic arms from the entry node (rewards 1 and 0) plus noop.
inline Hag bandit_graph() {
  std::vector<Node> nodes = {{1, NodeKind::Cyber, true, {}},
                             {2, NodeKind::Cyber, false, {}},
                             {3, NodeKind::Physical, false, {}}};
  std::vector<ExploitEdge> edges = {
      {1, 2, 1.0, 0.0, SuccessProb::constant(1.0)},
      {1, 3, 0.0, 0.0, SuccessProb::constant(1.0)},
  };
  return Hag(std::move(nodes), std::move(edges));
}

// Random DAG/OR graph with non-negative expected per-action net rewards
// (noop reward 0, cost <= prob * reward), 4..12 nodes in topological id
// order, physical sinks at the tail, and 1..8 available entry exploits.
inline Hag random_dag(Rng& rng) {
  for (;;) {
    int n = 4 + static_cast<int>(rng.uniform_int(9));  // 4..12
    int n_phys = 1 + static_cast<int>(rng.uniform_int(2));
    int n_cyber = n - n_phys;

    std::vector<Node> nodes;
    for (NodeId id = 1; id <= n_cyber; ++id) {
      bool entry = id == 1 || rng.bernoulli(0.25);
      nodes.push_back({id, NodeKind::Cyber, entry, {}});
    }
    for (NodeId id = n_cyber + 1; id <= n; ++id)
      nodes.push_back({id, NodeKind::Physical, false, {}});

    std::vector<ExploitEdge> edges;
    double density = 0.25 + 0.35 * rng.uniform();
    for (NodeId from = 1; from <= n_cyber; ++from) {
      for (NodeId to = from + 1; to <= n; ++to) {
        if (!rng.bernoulli(density)) continue;
        double prob = 0.05 + 0.95 * rng.uniform();
        double reward = 0.2 + 1.8 * rng.uniform();
        double cost = rng.uniform() * prob * reward;  // keeps E[net] >= 0
        edges.push_back({from, to, reward, cost, SuccessProb::constant(prob)});
      }
    }
    if (edges.empty()) continue;

    Hag hag(std::move(nodes), std::move(edges));
    std::size_t entry_exploits = hag.available_edges(hag.initial_security()).size();
    if (entry_exploits >= 1 && entry_exploits <= 8) return hag;
  }
}

}  // namespace hagemu::test
