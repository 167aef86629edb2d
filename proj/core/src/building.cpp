#include "hagemu/building.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "hagemu/environment.hpp"

namespace hagemu {
namespace building {

double outside_air(int t, double phase, Rng& rng) {
  return outside_air_mean(t, phase) + rng.uniform(-1.0, 1.0);
}

double outside_air_mean(int t, double phase) {
  BuildingParams p;
  return 0.5 * (p.x_low + p.x_high) + 4.0 * std::sin(0.125 * t + phase);
}

double attack_success_prob(int t) {
  return 0.5 - 0.1 * std::floor(static_cast<double>(t) / 10.0);
}

Control threshold_control(double measured, double last_supply, const BuildingParams& p) {
  if (measured < p.x_low)
    return {p.supply_heat, p.max_airflow * std::min(p.x_low - measured, 1.0)};
  if (measured > p.x_high)
    return {p.supply_cool, p.max_airflow * std::min(measured - p.x_high, 1.0)};
  return {last_supply, 0.0};
}

double zone_step(double x, double supply, double airflow, double w,
                 const BuildingParams& p) {
  return x + p.airflow_gain * airflow * (supply - x) + p.ambient_gain * (w - x);
}

double discomfort_reward(double x_next, const BuildingParams& p) {
  return std::max(p.x_low - x_next, 0.0) + std::max(x_next - p.x_high, 0.0);
}

double net_reward(double magnitude, bool success, double x_next,
                  const BuildingParams& p) {
  double cost = 0.5 * magnitude * magnitude;
  return success ? discomfort_reward(x_next, p) - cost : -cost;
}

double roi_metric(const EpisodeTrace& trace) {
  double observed = 0.0;
  double cost = 0.0;
  for (const TraceStep& row : trace.steps) {
    if (!row.action.is_physical()) continue;
    double c = 0.5 * row.magnitude * row.magnitude;
    // net reward is observed - c on success and -c on failure, so the
    // observed discomfort is always reward + c.
    observed += row.reward + c;
    cost += c;
  }
  if (cost <= 0.0)
    raise(ErrorCode::ZeroCostTrace, "trace contains no costly attack action");
  return observed / cost;
}

Hag build_building_hag(double grid_step, const BuildingParams& p) {
  double span = 2.0 * p.action_bound;
  double steps = span / grid_step;
  if (!(grid_step > 0.0) || std::abs(steps - std::round(steps)) > 1e-9)
    raise(ErrorCode::BadGridStep,
          "grid step " + std::to_string(grid_step) + " does not divide [-" +
              std::to_string(p.action_bound) + "," + std::to_string(p.action_bound) +
              "] evenly");
  int count = static_cast<int>(std::round(steps)) + 1;

  std::vector<Node> nodes;
  for (NodeId id = 1; id <= 4; ++id)
    nodes.push_back({id, NodeKind::Cyber, id == 1, {}});

  Node zone{5, NodeKind::Physical, false, {}};
  for (int i = 0; i < count; ++i) {
    double magnitude = -p.action_bound + grid_step * i;
    if (std::abs(magnitude) < 1e-12) magnitude = 0.0;
    char label[32];
    std::snprintf(label, sizeof(label), "perturb%+.3f", magnitude);
    zone.physical_actions.push_back({label, magnitude, 0.5 * magnitude * magnitude});
  }
  nodes.push_back(zone);

  auto edge = [](NodeId from, NodeId to, double prob) {
    return ExploitEdge{from, to, 1.0, 0.1, SuccessProb::constant(prob)};
  };
  std::vector<ExploitEdge> edges = {
      edge(1, 2, 0.9), edge(1, 3, 0.7), edge(2, 3, 0.9),
      edge(3, 4, 0.8), edge(4, 5, 0.5),
  };

  return Hag(std::move(nodes), std::move(edges), /*noop_reward=*/0.0);
}

}  // namespace building
}  // namespace hagemu
