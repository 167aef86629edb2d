#pragma once

#include <vector>

#include "hagemu/rng.hpp"

namespace hagemu {

// Control input applied at a physical node during one transition. The
// building case reads this as (supply-air temperature degC, airflow kg/s);
// other scenarios may use either channel or neither.
struct Control {
  double supply = 0.0;
  double airflow = 0.0;
};

// Episode-level disturbance parameters, drawn once per episode. The
// building's outside-air process carries a sine phase that shifts across
// training episodes and is randomized for test episodes.
struct EpisodeSetup {
  double phase = 0.0;
};

// Physical-layer hooks for one scenario. All functions are pure given the
// rng, so rollouts may run concurrently on independent streams. `slot`
// indexes the graph's physical nodes in id order.
class Scenario {
 public:
  virtual ~Scenario() = default;

  virtual int horizon() const = 0;

  // Declared bounds of the continuous state, used for initial sampling and
  // tile-coding ranges. States may drift outside; features clamp.
  virtual double state_lower(int slot) const = 0;
  virtual double state_upper(int slot) const = 0;

  virtual double initial_state(int slot, Rng& rng) const;
  virtual Control initial_control(int slot) const { return {}; }

  virtual EpisodeSetup training_setup(long episode, Rng& rng) const {
    (void)episode;
    (void)rng;
    return {};
  }
  virtual EpisodeSetup test_setup(Rng& rng) const {
    (void)rng;
    return {};
  }

  // Disturbance realization w_t and its mean (the mean is what model-based
  // planning and the greedy baseline use in place of an unseen draw).
  virtual double disturbance(int slot, int t, const EpisodeSetup& setup,
                             Rng& rng) const = 0;
  virtual double disturbance_mean(int slot, int t, const EpisodeSetup& setup) const = 0;

  // Success probability of a physical perturbation attempted at time t.
  virtual double attack_success_prob(int slot, double magnitude, int t) const = 0;

  // Control law reacting to the measured (possibly perturbed) state.
  virtual Control control(int slot, double measured, double last_supply) const = 0;

  // One-step dynamics of the true state under control and disturbance.
  virtual double advance(int slot, double x, const Control& u, double w) const = 0;

  // Realized reward of a successful perturbation, given the next state.
  virtual double action_reward(int slot, double magnitude, double x_next) const = 0;
};

// Inert physical layer: constant state, no noise, no attack surface.
// Used for purely cyber graphs (the physical root still needs a slot).
class StaticScenario : public Scenario {
 public:
  explicit StaticScenario(int horizon, double value = 0.5)
      : horizon_(horizon), value_(value) {}

  int horizon() const override { return horizon_; }
  double state_lower(int) const override { return 0.0; }
  double state_upper(int) const override { return 1.0; }
  double initial_state(int, Rng&) const override { return value_; }
  double disturbance(int, int, const EpisodeSetup&, Rng&) const override { return 0.0; }
  double disturbance_mean(int, int, const EpisodeSetup&) const override { return 0.0; }
  double attack_success_prob(int, double, int) const override { return 0.0; }
  Control control(int, double, double last_supply) const override {
    return {last_supply, 0.0};
  }
  double advance(int, double x, const Control&, double) const override { return x; }
  double action_reward(int, double, double) const override { return 0.0; }

 private:
  int horizon_;
  double value_;
};

}  // namespace hagemu
