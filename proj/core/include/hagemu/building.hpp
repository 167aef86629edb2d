#pragma once

#include <string>

#include "hagemu/attack_graph.hpp"
#include "hagemu/scenario.hpp"

namespace hagemu {

struct EpisodeTrace;  // environment.hpp

namespace building {

// Single-zone building under sensor-deception attack. The AHU holds the
// zone inside [x_low, x_high]; the adversary perturbs the measured
// temperature to trick the threshold controller into discomfort.
struct BuildingParams {
  double x_low = 23.0;          // comfort band lower bound, degC
  double x_high = 25.0;         // comfort band upper bound, degC
  double airflow_gain = 0.01;   // zone response to conditioned airflow
  double ambient_gain = 0.1;    // zone response to outside air
  double supply_heat = 30.0;    // supply-air temperature when heating, degC
  double supply_cool = 15.0;    // supply-air temperature when cooling, degC
  double max_airflow = 10.0;    // airflow scale, kg/s
  double action_bound = 2.0;    // perturbation grid spans [-bound, bound]
  double grid_step = 1.0;       // delta between adjacent perturbations
  int horizon = 48;
  // Declared feature range for the zone temperature; attacks push the zone
  // outside the comfort band, so this is wider than [x_low, x_high].
  double feature_low = 16.0;
  double feature_high = 32.0;
};

// Outside-air draw: 0.5(x_low+x_high) + 4 sin(0.125 t + k) + U(-1,1).
double outside_air(int t, double phase, Rng& rng);
double outside_air_mean(int t, double phase);

// Perturbation success probability: 0.5 - 0.1*floor(t/10).
double attack_success_prob(int t);

// Threshold AHU policy on the measured temperature. Returns the supply
// temperature and airflow; in-band measurements hold the previous supply
// with zero airflow.
Control threshold_control(double measured, double last_supply,
                          const BuildingParams& p = {});

// Zone dynamics: x + 0.01 m (z - x) + 0.1 (w - x).
double zone_step(double x, double supply, double airflow, double w,
                 const BuildingParams& p = {});

// Occupant discomfort: distance of the next state from the comfort band.
double discomfort_reward(double x_next, const BuildingParams& p = {});

// Net attacker reward for perturbation a: discomfort - 0.5 a^2 on success,
// -0.5 a^2 on failure.
double net_reward(double magnitude, bool success, double x_next,
                  const BuildingParams& p = {});

// Return on investment over one episode: observed discomfort rewards of
// physical attack steps divided by their total quadratic cost. Raises
// ZeroCostTrace when the episode contains no costly attack.
double roi_metric(const EpisodeTrace& trace);

// Fig.-2-shaped graph: cyber chain 1..4 with five exploits (Table I
// probabilities, reward 1, cost 0.1) into physical root 5, whose actions
// are the perturbation grid {-2, -2+delta, ..., 2}.
Hag build_building_hag(double grid_step, const BuildingParams& p = {});

class BuildingScenario : public Scenario {
 public:
  explicit BuildingScenario(BuildingParams params = {}) : p_(params) {}

  const BuildingParams& params() const { return p_; }

  int horizon() const override { return p_.horizon; }
  double state_lower(int) const override { return p_.feature_low; }
  double state_upper(int) const override { return p_.feature_high; }

  // Initial zone temperature is uniform on the comfort band.
  double initial_state(int, Rng& rng) const override {
    return rng.uniform(p_.x_low, p_.x_high);
  }
  Control initial_control(int) const override { return {p_.supply_cool, 0.0}; }

  // The sine phase advances one unit per training episode and is uniform
  // on [0, 2pi) for test episodes.
  EpisodeSetup training_setup(long episode, Rng&) const override {
    return {static_cast<double>(episode)};
  }
  EpisodeSetup test_setup(Rng& rng) const override {
    return {rng.uniform(0.0, 6.283185307179586)};
  }

  double disturbance(int, int t, const EpisodeSetup& setup, Rng& rng) const override {
    return outside_air(t, setup.phase, rng);
  }
  double disturbance_mean(int, int t, const EpisodeSetup& setup) const override {
    return outside_air_mean(t, setup.phase);
  }
  double attack_success_prob(int, double, int t) const override {
    return building::attack_success_prob(t);
  }
  Control control(int, double measured, double last_supply) const override {
    return threshold_control(measured, last_supply, p_);
  }
  double advance(int, double x, const Control& u, double w) const override {
    return zone_step(x, u.supply, u.airflow, w, p_);
  }
  double action_reward(int, double, double x_next) const override {
    return discomfort_reward(x_next, p_);
  }

 private:
  BuildingParams p_;
};

}  // namespace building
}  // namespace hagemu
