#pragma once

#include <vector>

#include "hagemu/environment.hpp"

namespace hagemu {

// Output of the pruning phase: up to `budget` entry exploits chosen by
// greedy coverage, plus the pooled edge set A union R_A the myopic phase is
// allowed to use.
struct PrunedSet {
  std::vector<int> actions;        // selected entry edges, in selection order
  int budget = 0;
  std::vector<std::uint8_t> pool;  // per edge: usable by the myopic policy
};

// Expected net reward of attempting one exploit at time t:
// prob*(reward-cost) + (1-prob)*(noop_reward-cost).
double edge_expected_reward(const Hag& hag, int edge, int t);

// Q(a,s): sum of expected net rewards over R_a, the exploits on paths from
// a's target to any physical root (including a).
double path_value(const Hag& hag, int edge, int t = 0);

// Q(A,s): same sum over the union of the R_a, each edge counted once.
double set_value(const Hag& hag, const std::vector<int>& edges, int t = 0);

// Greedy coverage over the exploits available at `security`: budget rounds
// of argmax Q(A + {a}), ties to the lowest edge index, stopping early when
// candidates run out. Raises NoEntryExploits when none are available.
PrunedSet prune(const Hag& hag, const SecurityVector& security, int budget, int t = 0);

// Myopic phase: the pooled exploit with the highest nominal net reward, or
// the physical perturbation with the highest one-step predicted net reward
// (success assumed, mean disturbance), or noop when nothing strictly beats
// the noop reward.
Action myopic_action(const Hag& hag, const Scenario& scenario, const PrunedSet& pruned,
                     const SystemState& state, const EpisodeSetup& setup);

struct BoundCertificate {
  double greedy_value = 0.0;
  double optimal_value = 0.0;
  double ratio = 1.0;
};

// Compares the greedy pruned set against exhaustive enumeration of all
// budget-sized subsets of the available entry exploits. On DAG/OR graphs
// with non-negative expected rewards the ratio is at least 1 - 1/e.
// Raises TooLargeForExhaustive above 20 entry exploits.
BoundCertificate certify_bound(const Hag& hag, const SecurityVector& security,
                               int budget);

// Two-phase attack policy. With `reprune` the pruning phase reruns at every
// step on the current state; otherwise the set from t=0 is kept.
PolicyFn make_greedy_policy(const Hag& hag, const Scenario& scenario, PrunedSet pruned,
                            bool reprune = false);

}  // namespace hagemu
