#include "hagemu/greedy.hpp"

#include <algorithm>
#include <utility>

namespace hagemu {

double edge_expected_reward(const Hag& hag, int edge, int t) {
  if (edge < 0 || edge >= hag.num_edges())
    raise(ErrorCode::UnknownAction, "edge index " + std::to_string(edge));
  const ExploitEdge& e = hag.edges()[static_cast<std::size_t>(edge)];
  double p = e.success_prob.at(t);
  return p * (e.reward - e.cost) + (1.0 - p) * (hag.noop_reward() - e.cost);
}

double path_value(const Hag& hag, int edge, int t) {
  double total = 0.0;
  for (int e : hag.reachable_actions(hag.exploit_action(edge)))
    total += edge_expected_reward(hag, e, t);
  return total;
}

double set_value(const Hag& hag, const std::vector<int>& edges, int t) {
  std::vector<std::uint8_t> in_union(static_cast<std::size_t>(hag.num_edges()), 0);
  for (int a : edges)
    for (int e : hag.reachable_actions(hag.exploit_action(a)))
      in_union[static_cast<std::size_t>(e)] = 1;
  double total = 0.0;
  for (int e = 0; e < hag.num_edges(); ++e)
    if (in_union[static_cast<std::size_t>(e)]) total += edge_expected_reward(hag, e, t);
  return total;
}

PrunedSet prune(const Hag& hag, const SecurityVector& security, int budget, int t) {
  if (budget < 1) raise(ErrorCode::BadConfig, "pruning budget must be >= 1");
  std::vector<int> candidates = hag.available_edges(security);
  if (candidates.empty())
    raise(ErrorCode::NoEntryExploits, "no cyber exploit available for pruning");

  PrunedSet pruned;
  pruned.budget = budget;
  std::vector<int> chosen;
  for (int round = 0; round < budget && !candidates.empty(); ++round) {
    int best_edge = -1;
    double best_value = 0.0;
    for (int a : candidates) {
      std::vector<int> with = chosen;
      with.push_back(a);
      double v = set_value(hag, with, t);
      if (best_edge < 0 || v > best_value) {  // ties keep the lower edge index
        best_edge = a;
        best_value = v;
      }
    }
    chosen.push_back(best_edge);
    candidates.erase(std::find(candidates.begin(), candidates.end(), best_edge));
  }

  pruned.actions = chosen;
  pruned.pool.assign(static_cast<std::size_t>(hag.num_edges()), 0);
  for (int a : chosen)
    for (int e : hag.reachable_actions(hag.exploit_action(a)))
      pruned.pool[static_cast<std::size_t>(e)] = 1;
  return pruned;
}

Action myopic_action(const Hag& hag, const Scenario& scenario, const PrunedSet& pruned,
                     const SystemState& state, const EpisodeSetup& setup) {
  Action best = hag.noop();
  double best_value = hag.noop_reward();

  for (int e : hag.available_edges(state.security)) {
    if (!pruned.pool[static_cast<std::size_t>(e)]) continue;
    const ExploitEdge& edge = hag.edges()[static_cast<std::size_t>(e)];
    double nominal = edge.reward - edge.cost;
    if (nominal > best_value) {
      best_value = nominal;
      best = hag.exploit_action(e);
    }
  }

  for (const Action& a : hag.all_actions()) {
    if (!a.is_physical() || !state.security[static_cast<std::size_t>(a.node - 1)])
      continue;
    const PhysicalActionSpec& spec =
        hag.node(a.node).physical_actions[static_cast<std::size_t>(a.action)];
    int slot = hag.physical_slot(a.node);
    double x = state.physical[static_cast<std::size_t>(slot)];
    double w = scenario.disturbance_mean(slot, state.t, setup);
    Control u = scenario.control(slot, x + spec.magnitude,
                                 state.control[static_cast<std::size_t>(slot)].supply);
    double x_next = scenario.advance(slot, x, u, w);
    double nominal = scenario.action_reward(slot, spec.magnitude, x_next) - spec.cost;
    if (nominal > best_value) {
      best_value = nominal;
      best = a;
    }
  }
  return best;
}

namespace {

// Largest Q over all budget-sized subsets of the candidates.
double exhaustive_best(const Hag& hag, const std::vector<int>& candidates, int budget) {
  const int n = static_cast<int>(candidates.size());
  const int k = std::min(budget, n);
  std::vector<int> pick(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i;

  double best = 0.0;
  bool first = true;
  while (true) {
    std::vector<int> subset;
    subset.reserve(static_cast<std::size_t>(k));
    for (int i : pick) subset.push_back(candidates[static_cast<std::size_t>(i)]);
    double v = set_value(hag, subset, 0);
    if (first || v > best) {
      best = v;
      first = false;
    }
    // next combination
    int i = k - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == i + n - k) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
  return best;
}

}  // namespace

BoundCertificate certify_bound(const Hag& hag, const SecurityVector& security,
                               int budget) {
  std::vector<int> candidates = hag.available_edges(security);
  if (candidates.empty())
    raise(ErrorCode::NoEntryExploits, "no cyber exploit available");
  if (candidates.size() > 20)
    raise(ErrorCode::TooLargeForExhaustive,
          std::to_string(candidates.size()) + " entry exploits exceed the exhaustive limit");

  BoundCertificate cert;
  cert.greedy_value = set_value(hag, prune(hag, security, budget).actions, 0);
  cert.optimal_value = exhaustive_best(hag, candidates, budget);
  cert.ratio =
      cert.optimal_value > 0.0 ? cert.greedy_value / cert.optimal_value : 1.0;
  return cert;
}

PolicyFn make_greedy_policy(const Hag& hag, const Scenario& scenario, PrunedSet pruned,
                            bool reprune) {
  return [&hag, &scenario, pruned = std::move(pruned), reprune](
             const SystemState& state, const EpisodeSetup& setup, Rng&) {
    if (!reprune) return myopic_action(hag, scenario, pruned, state, setup);
    PrunedSet current;
    try {
      current = prune(hag, state.security, pruned.budget, state.t);
    } catch (const HagError&) {
      current.budget = pruned.budget;
      current.pool.assign(static_cast<std::size_t>(hag.num_edges()), 0);
    }
    return myopic_action(hag, scenario, current, state, setup);
  };
}

}  // namespace hagemu
