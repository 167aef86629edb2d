#include "hagemu/environment.hpp"

#include <utility>

namespace hagemu {

SystemState initial_state(const Hag& hag, const Scenario& scenario, Rng& rng) {
  SystemState s;
  s.t = 0;
  s.security = hag.initial_security();
  const int slots = static_cast<int>(hag.physical_nodes().size());
  s.physical.resize(static_cast<std::size_t>(slots));
  s.control.resize(static_cast<std::size_t>(slots));
  s.disturbance.assign(static_cast<std::size_t>(slots), 0.0);
  for (int p = 0; p < slots; ++p) {
    s.physical[static_cast<std::size_t>(p)] = scenario.initial_state(p, rng);
    s.control[static_cast<std::size_t>(p)] = scenario.initial_control(p);
  }
  return s;
}

double Scenario::initial_state(int slot, Rng& rng) const {
  return rng.uniform(state_lower(slot), state_upper(slot));
}

Disturbance draw_disturbance(const Hag& hag, const Scenario& scenario,
                             const EpisodeSetup& setup, int t, Rng& rng) {
  Disturbance d;
  d.exploit_draw = rng.uniform();
  const int slots = static_cast<int>(hag.physical_nodes().size());
  d.noise.resize(static_cast<std::size_t>(slots));
  for (int p = 0; p < slots; ++p)
    d.noise[static_cast<std::size_t>(p)] = scenario.disturbance(p, t, setup, rng);
  return d;
}

StepResult step(const Hag& hag, const Scenario& scenario, const SystemState& state,
                const Action& action, const Disturbance& d) {
  if (state.t >= scenario.horizon())
    raise(ErrorCode::HorizonExceeded,
          "step at t=" + std::to_string(state.t) + " with horizon " +
              std::to_string(scenario.horizon()));
  if (static_cast<int>(state.security.size()) != hag.num_nodes())
    raise(ErrorCode::DimensionMismatch, "state security size mismatch");

  // Legality: exploits need an available edge, physical actions a
  // compromised node. Noop is always legal.
  if (action.is_exploit()) {
    const ExploitEdge& edge = hag.edges()[static_cast<std::size_t>(action.edge)];
    if (!state.security[static_cast<std::size_t>(edge.from - 1)] ||
        state.security[static_cast<std::size_t>(edge.to - 1)])
      raise(ErrorCode::IllegalAction, "exploit " + hag.action_label(action) +
                                          " unavailable in current state");
  } else if (action.is_physical()) {
    if (!state.security[static_cast<std::size_t>(action.node - 1)])
      raise(ErrorCode::IllegalAction,
            "physical node " + std::to_string(action.node) + " not compromised");
  }

  StepResult result;
  result.next = state;
  result.next.t = state.t + 1;

  bool success = false;
  double perturbation = 0.0;
  int perturbed_slot = -1;

  if (action.is_noop()) {
    success = true;
    result.reward = hag.noop_reward();
  } else if (action.is_exploit()) {
    const ExploitEdge& edge = hag.edges()[static_cast<std::size_t>(action.edge)];
    success = d.exploit_draw < edge.success_prob.at(state.t);
    if (success) {
      result.next.security[static_cast<std::size_t>(edge.to - 1)] = 1;
      result.reward = edge.reward - edge.cost;
    } else {
      result.reward = hag.noop_reward() - edge.cost;
    }
  } else {
    const PhysicalActionSpec& spec =
        hag.node(action.node).physical_actions[static_cast<std::size_t>(action.action)];
    int slot = hag.physical_slot(action.node);
    success = d.exploit_draw <
              scenario.attack_success_prob(slot, spec.magnitude, state.t);
    if (success) {
      perturbation = spec.magnitude;
      perturbed_slot = slot;
    }
  }

  // Physical layer: measurement, control law, dynamics for every slot.
  const int slots = static_cast<int>(hag.physical_nodes().size());
  for (int p = 0; p < slots; ++p) {
    double x = state.physical[static_cast<std::size_t>(p)];
    double w = d.noise[static_cast<std::size_t>(p)];
    double measured = x + (p == perturbed_slot ? perturbation : 0.0);
    Control u =
        scenario.control(p, measured, state.control[static_cast<std::size_t>(p)].supply);
    double x_next = scenario.advance(p, x, u, w);
    result.next.physical[static_cast<std::size_t>(p)] = x_next;
    result.next.control[static_cast<std::size_t>(p)] = u;
    result.next.disturbance[static_cast<std::size_t>(p)] = w;
  }

  if (action.is_physical()) {
    const PhysicalActionSpec& spec =
        hag.node(action.node).physical_actions[static_cast<std::size_t>(action.action)];
    int slot = hag.physical_slot(action.node);
    double x_next = result.next.physical[static_cast<std::size_t>(slot)];
    if (success)
      result.reward = scenario.action_reward(slot, spec.magnitude, x_next) - spec.cost;
    else
      result.reward = hag.noop_reward() - spec.cost;
  }

  result.success = success;
  return result;
}

StepResult step(const Hag& hag, const Scenario& scenario, const EpisodeSetup& setup,
                const SystemState& state, const Action& action, Rng& rng) {
  return step(hag, scenario, state, action,
              draw_disturbance(hag, scenario, setup, state.t, rng));
}

namespace {

bool any_root_compromised(const Hag& hag, const SystemState& s) {
  for (NodeId id : hag.physical_nodes())
    if (s.security[static_cast<std::size_t>(id - 1)]) return true;
  return false;
}

}  // namespace

EpisodeTrace rollout(const Hag& hag, const Scenario& scenario,
                     const EpisodeSetup& setup, const PolicyFn& policy,
                     SystemState s0, Rng& rng) {
  const int horizon = scenario.horizon();
  EpisodeTrace trace;
  trace.steps.reserve(static_cast<std::size_t>(horizon));
  trace.time_to_root = horizon + 1;

  SystemState state = std::move(s0);
  if (any_root_compromised(hag, state)) trace.time_to_root = 0;

  for (int t = 0; t < horizon; ++t) {
    Action action = policy(state, setup, rng);
    Disturbance d = draw_disturbance(hag, scenario, setup, t, rng);
    StepResult r = step(hag, scenario, state, action, d);

    TraceStep row;
    row.t = t;
    row.action = action;
    if (action.is_physical())
      row.magnitude = hag.node(action.node)
                          .physical_actions[static_cast<std::size_t>(action.action)]
                          .magnitude;
    row.success = r.success;
    row.reward = r.reward;
    row.security_mask = state.security_mask();
    if (!state.physical.empty()) {
      row.zone_temp = state.physical[0];
      row.outside_temp = r.next.disturbance[0];
      row.control = r.next.control[0];
      double perturb = 0.0;
      if (action.is_physical() && r.success && hag.physical_slot(action.node) == 0)
        perturb = hag.node(action.node)
                      .physical_actions[static_cast<std::size_t>(action.action)]
                      .magnitude;
      row.measured_temp = state.physical[0] + perturb;
      // Discomfort incurred this step but not credited as attacker reward.
      bool credited = action.is_physical() && r.success && hag.physical_slot(action.node) == 0;
      row.passive_discomfort =
          credited ? 0.0 : scenario.action_reward(0, 0.0, r.next.physical[0]);
    }
    trace.steps.push_back(row);
    trace.total_reward += r.reward;

    state = std::move(r.next);
    if (trace.time_to_root > horizon && any_root_compromised(hag, state))
      trace.time_to_root = state.t;
  }

  trace.final_state = std::move(state);
  return trace;
}

}  // namespace hagemu
