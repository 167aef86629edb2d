#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hagemu/attack_graph.hpp"
#include "hagemu/rng.hpp"
#include "hagemu/scenario.hpp"

namespace hagemu {

// Joint MDP state: time index, security bits, continuous physical states,
// and the control memory / disturbance snapshot of the transition that
// produced it. Security bits only ever flip 0 -> 1 along a trajectory.
struct SystemState {
  int t = 0;
  SecurityVector security;
  std::vector<double> physical;      // per physical slot
  std::vector<Control> control;      // control applied entering this state
  std::vector<double> disturbance;   // disturbance realized entering this state

  std::uint64_t security_mask() const {
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < security.size(); ++i)
      if (security[i]) mask |= (1ull << i);
    return mask;
  }
};

// One step's uncertainty realizations: a single uniform draw deciding the
// attempted action's outcome (success iff draw < success probability), and
// one disturbance per physical slot. Sampling a full path up front and
// replaying it yields the same trajectory as drawing on the fly.
struct Disturbance {
  double exploit_draw = 1.0;
  std::vector<double> noise;
};

struct StepResult {
  SystemState next;
  double reward = 0.0;
  bool success = false;
};

struct TraceStep {
  int t = 0;
  double zone_temp = 0.0;      // true physical state of slot 0 before the step
  double measured_temp = 0.0;  // perturbed measurement seen by the controller
  double outside_temp = 0.0;   // disturbance realized this step
  Action action;
  double magnitude = 0.0;      // attempted perturbation (physical actions)
  bool success = false;
  double reward = 0.0;
  Control control;             // control applied this step (slot 0)
  std::uint64_t security_mask = 0;  // mask before the step
  double passive_discomfort = 0.0;  // discomfort not credited as reward
};

struct EpisodeTrace {
  std::vector<TraceStep> steps;
  SystemState final_state;
  double total_reward = 0.0;
  // First t whose state has any physical root compromised; horizon+1 if never.
  int time_to_root = 0;
};

// A (possibly stochastic) attack policy.
using PolicyFn =
    std::function<Action(const SystemState&, const EpisodeSetup&, Rng&)>;

// Entry security bits set, physical states sampled by the scenario.
SystemState initial_state(const Hag& hag, const Scenario& scenario, Rng& rng);

Disturbance draw_disturbance(const Hag& hag, const Scenario& scenario,
                             const EpisodeSetup& setup, int t, Rng& rng);

// One MDP transition with the given uncertainty realizations. The physical
// layer always advances (disturbance draw, measurement, control law,
// dynamics); the action decides whether a security bit may flip and which
// reward branch applies. Raises IllegalAction / HorizonExceeded.
StepResult step(const Hag& hag, const Scenario& scenario, const SystemState& state,
                const Action& action, const Disturbance& d);

// Convenience overload drawing the disturbance from the stream.
StepResult step(const Hag& hag, const Scenario& scenario, const EpisodeSetup& setup,
                const SystemState& state, const Action& action, Rng& rng);

EpisodeTrace rollout(const Hag& hag, const Scenario& scenario,
                     const EpisodeSetup& setup, const PolicyFn& policy,
                     SystemState s0, Rng& rng);

}  // namespace hagemu
