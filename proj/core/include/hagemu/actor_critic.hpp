#pragma once

#include <cstdint>

#include "hagemu/adp.hpp"  // TrainStats
#include "hagemu/environment.hpp"
#include "hagemu/linear_model.hpp"

namespace hagemu {

struct AcConfig {
  long episodes = 10000;
  double critic_step = 0.1 / 8.0;   // must exceed actor_step
  double actor_step = 0.01 / 8.0;
  double discount = 1.0;
  std::uint64_t seed = 42;

  void validate() const;
};

// delta = r + discount * J(s_next) - J(s); the successor value is zero once
// s_next sits at the horizon.
double td_error(const ValueWeights& weights, const TileCoderSpec& spec,
                double reward, const SystemState& s, const SystemState& s_next,
                int horizon, double discount);

// theta += step * delta * eligibility on the active tiles. The training
// loop passes eligibility 1 for the critic; the parameter exists so callers
// can scale the update explicitly.
void critic_update(ValueWeights& weights, double delta, const FeatureVec& features,
                   double step, double eligibility);

// psi += step * eligibility * delta * grad ln pi.
void actor_update(PreferenceWeights& prefs, double delta,
                  const LogPolicyGradient& grad, double step, double eligibility);

struct AcResult {
  ValueWeights critic;
  PreferenceWeights actor;
  TrainStats stats;
};

// One-step actor-critic: sample from the softmax restricted to the
// available actions, step the environment, update critic then actor, and
// decay the eligibility scalar I by the discount each step.
AcResult ac_train(const Hag& hag, const Scenario& scenario, const TileCoderSpec& spec,
                  const AcConfig& config);

// Policy over the trained preferences. `greedy` takes the argmax of the
// softmax instead of sampling (ties go to the lowest action index).
PolicyFn make_softmax_policy(const Hag& hag, const PreferenceWeights& prefs,
                             const TileCoderSpec& spec, bool greedy = false);

}  // namespace hagemu
