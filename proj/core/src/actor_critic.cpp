#include "hagemu/actor_critic.hpp"

#include <cmath>
#include <utility>

namespace hagemu {

void AcConfig::validate() const {
  if (episodes < 0) raise(ErrorCode::BadConfig, "episodes must be >= 0");
  if (!(critic_step > actor_step && actor_step > 0.0))
    raise(ErrorCode::BadConfig, "step sizes must satisfy critic_step > actor_step > 0");
  if (!(discount > 0.0 && discount <= 1.0))
    raise(ErrorCode::BadConfig, "discount must lie in (0,1]");
}

double td_error(const ValueWeights& weights, const TileCoderSpec& spec,
                double reward, const SystemState& s, const SystemState& s_next,
                int horizon, double discount) {
  double next_value =
      s_next.t >= horizon ? 0.0 : value(weights, tile_features(spec, s_next));
  return reward + discount * next_value - value(weights, tile_features(spec, s));
}

void critic_update(ValueWeights& weights, double delta, const FeatureVec& features,
                   double step, double eligibility) {
  add_scaled(weights, features, step * delta * eligibility);
}

void actor_update(PreferenceWeights& prefs, double delta,
                  const LogPolicyGradient& grad, double step, double eligibility) {
  add_scaled(prefs, grad, step * eligibility * delta);
}

namespace {

std::size_t sample_index(const std::vector<double>& probs, Rng& rng) {
  double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    acc += probs[k];
    if (u < acc) return k;
  }
  return probs.size() - 1;
}

}  // namespace

AcResult ac_train(const Hag& hag, const Scenario& scenario, const TileCoderSpec& spec,
                  const AcConfig& config) {
  config.validate();
  const int horizon = scenario.horizon();

  AcResult result{ValueWeights(spec.hash_size),
                  PreferenceWeights(hag.num_actions(), spec.hash_size),
                  {}};
  result.stats.episode_return.reserve(static_cast<std::size_t>(config.episodes));
  result.stats.mean_td_error.reserve(static_cast<std::size_t>(config.episodes));

  for (long episode = 0; episode < config.episodes; ++episode) {
    Rng rng = Rng::child(config.seed, static_cast<std::uint64_t>(episode));
    EpisodeSetup setup = scenario.training_setup(episode, rng);
    SystemState state = initial_state(hag, scenario, rng);

    double eligibility = 1.0;
    double episode_return = 0.0;
    double td_abs = 0.0;

    for (int t = 0; t < horizon; ++t) {
      std::vector<Action> actions = hag.action_space(state.security);
      FeatureVec feats = tile_features(spec, state);
      std::vector<double> pi = softmax_policy(result.actor, feats, actions);
      const Action& action = actions[sample_index(pi, rng)];

      StepResult r = step(hag, scenario, setup, state, action, rng);
      double delta = td_error(result.critic, spec, r.reward, state, r.next, horizon,
                              config.discount);
      critic_update(result.critic, delta, feats, config.critic_step, 1.0);
      LogPolicyGradient grad = log_policy_gradient(result.actor, feats, actions, action);
      actor_update(result.actor, delta, grad, config.actor_step, eligibility);

      eligibility *= config.discount;
      episode_return += r.reward;
      td_abs += std::abs(delta);
      state = std::move(r.next);
    }

    result.stats.episode_return.push_back(episode_return);
    result.stats.mean_td_error.push_back(horizon > 0 ? td_abs / horizon : 0.0);
  }
  return result;
}

PolicyFn make_softmax_policy(const Hag& hag, const PreferenceWeights& prefs,
                             const TileCoderSpec& spec, bool greedy) {
  return [&hag, prefs, spec, greedy](const SystemState& state, const EpisodeSetup&,
                                     Rng& rng) {
    std::vector<Action> actions = hag.action_space(state.security);
    std::vector<double> pi =
        softmax_policy(prefs, tile_features(spec, state), actions);
    if (greedy) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < pi.size(); ++k)
        if (pi[k] > pi[best]) best = k;
      return actions[best];
    }
    return actions[sample_index(pi, rng)];
  };
}

}  // namespace hagemu
