#include "hagemu/adp.hpp"

#include <cmath>
#include <utility>

namespace hagemu {

void AdpConfig::validate() const {
  if (episodes < 0) raise(ErrorCode::BadConfig, "episodes must be >= 0");
  if (!(smoothing_alpha >= 0.0 && smoothing_alpha <= 1.0))
    raise(ErrorCode::BadConfig, "smoothing_alpha must lie in [0,1]");
  if (!(discount > 0.0 && discount <= 1.0))
    raise(ErrorCode::BadConfig, "discount must lie in (0,1]");
  if (!(step.value > 0.0)) raise(ErrorCode::BadConfig, "step size must be positive");
  if (expectation == ExpectationMode::MonteCarlo && mc_samples < 1)
    raise(ErrorCode::BadConfig, "MonteCarlo expectation needs mc_samples >= 1");
}

namespace {

// Expected one-step value of `action`: branch on success/failure with the
// given disturbance realization, or average fresh Monte Carlo draws.
double action_value(const Hag& hag, const Scenario& scenario,
                    const SystemState& state, const ValueWeights& weights,
                    const TileCoderSpec& spec, const AdpConfig& config,
                    const std::vector<double>& planning_w,
                    const EpisodeSetup& setup, const Action& action,
                    Rng* mc_rng) {
  const int horizon = scenario.horizon();
  auto successor_value = [&](const SystemState& next) {
    if (next.t >= horizon) return 0.0;
    return value(weights, tile_features(spec, next));
  };

  if (config.expectation == ExpectationMode::MonteCarlo && mc_rng != nullptr) {
    double total = 0.0;
    for (int i = 0; i < config.mc_samples; ++i) {
      StepResult r = step(hag, scenario, setup, state, action, *mc_rng);
      total += r.reward + config.discount * successor_value(r.next);
    }
    return total / config.mc_samples;
  }

  // Exact enumeration over the attempt outcome; exploit_draw 0 forces the
  // success branch, 1 forces failure.
  double prob_success = 0.0;
  if (action.is_exploit()) {
    const ExploitEdge& edge = hag.edges()[static_cast<std::size_t>(action.edge)];
    prob_success = edge.success_prob.at(state.t);
  } else if (action.is_physical()) {
    const PhysicalActionSpec& a =
        hag.node(action.node).physical_actions[static_cast<std::size_t>(action.action)];
    prob_success =
        scenario.attack_success_prob(hag.physical_slot(action.node), a.magnitude, state.t);
  } else {
    prob_success = 1.0;
  }

  double total = 0.0;
  if (prob_success > 0.0) {
    StepResult r = step(hag, scenario, state, action, Disturbance{0.0, planning_w});
    total += prob_success * (r.reward + config.discount * successor_value(r.next));
  }
  if (prob_success < 1.0) {
    StepResult r = step(hag, scenario, state, action, Disturbance{1.0, planning_w});
    total += (1.0 - prob_success) * (r.reward + config.discount * successor_value(r.next));
  }
  return total;
}

}  // namespace

Backup greedy_backup(const Hag& hag, const Scenario& scenario,
                     const SystemState& state, const ValueWeights& weights,
                     const TileCoderSpec& spec, const AdpConfig& config,
                     const std::vector<double>& planning_w,
                     const EpisodeSetup& setup, Rng* mc_rng) {
  std::vector<Action> actions = hag.action_space(state.security);
  Backup best;
  bool first = true;
  for (const Action& action : actions) {
    double v = action_value(hag, scenario, state, weights, spec, config, planning_w,
                            setup, action, mc_rng);
    if (first || v > best.v_hat) {
      best.v_hat = v;
      best.action = action;
      first = false;
    }
  }
  return best;
}

SecurityVector random_reachable_security(const Hag& hag, Rng& rng) {
  SecurityVector s = hag.initial_security();
  auto depth = rng.uniform_int(static_cast<std::uint64_t>(hag.num_nodes()) + 1);
  for (std::uint64_t i = 0; i < depth; ++i) {
    std::vector<int> avail = hag.available_edges(s);
    if (avail.empty()) break;
    int e = avail[rng.uniform_int(avail.size())];
    s[static_cast<std::size_t>(hag.edges()[static_cast<std::size_t>(e)].to - 1)] = 1;
  }
  return s;
}

AdpResult adp_train(const Hag& hag, const Scenario& scenario,
                    const TileCoderSpec& spec, const AdpConfig& config) {
  config.validate();
  const int horizon = scenario.horizon();
  const int slots = static_cast<int>(hag.physical_nodes().size());

  AdpResult result{ValueWeights(spec.hash_size), {}};
  result.stats.episode_return.reserve(static_cast<std::size_t>(config.episodes));
  result.stats.mean_td_error.reserve(static_cast<std::size_t>(config.episodes));

  long updates = 0;
  for (long episode = 0; episode < config.episodes; ++episode) {
    Rng rng = Rng::child(config.seed, static_cast<std::uint64_t>(episode));
    EpisodeSetup setup = scenario.training_setup(episode, rng);

    SystemState state = initial_state(hag, scenario, rng);
    if (config.exploring_starts) state.security = random_reachable_security(hag, rng);

    // The sampled disturbance path for this episode, fixed up front.
    std::vector<std::vector<double>> path(static_cast<std::size_t>(horizon));
    for (int t = 0; t < horizon; ++t) {
      path[static_cast<std::size_t>(t)].resize(static_cast<std::size_t>(slots));
      for (int p = 0; p < slots; ++p)
        path[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)] =
            scenario.disturbance(p, t, setup, rng);
    }

    double episode_return = 0.0;
    double td_abs = 0.0;
    for (int t = 0; t < horizon; ++t) {
      const std::vector<double>& w = path[static_cast<std::size_t>(t)];
      Backup backup =
          greedy_backup(hag, scenario, state, result.weights, spec, config, w, setup,
                        config.expectation == ExpectationMode::MonteCarlo ? &rng : nullptr);

      FeatureVec feats = tile_features(spec, state);
      double j = value(result.weights, feats);
      double target =
          config.smoothing_alpha * backup.v_hat + (1.0 - config.smoothing_alpha) * j;
      td_abs += std::abs(backup.v_hat - j);
      sgd_update(result.weights, feats, target, config.step.at(updates++));

      StepResult r = step(hag, scenario, state, backup.action,
                          Disturbance{rng.uniform(), w});
      episode_return += r.reward;
      state = std::move(r.next);
    }

    result.stats.episode_return.push_back(episode_return);
    result.stats.mean_td_error.push_back(horizon > 0 ? td_abs / horizon : 0.0);
  }
  return result;
}

PolicyFn make_adp_policy(const Hag& hag, const Scenario& scenario,
                         ValueWeights weights, TileCoderSpec spec, AdpConfig config) {
  // Planning at evaluation time uses the mean disturbance; Monte Carlo
  // estimates would make the policy non-deterministic.
  config.expectation = ExpectationMode::ExactEnumeration;
  return [&hag, &scenario, weights = std::move(weights), spec = std::move(spec),
          config](const SystemState& state, const EpisodeSetup& setup, Rng&) {
    const int slots = static_cast<int>(hag.physical_nodes().size());
    std::vector<double> w(static_cast<std::size_t>(slots));
    for (int p = 0; p < slots; ++p)
      w[static_cast<std::size_t>(p)] = scenario.disturbance_mean(p, state.t, setup);
    return greedy_backup(hag, scenario, state, weights, spec, config, w, setup).action;
  };
}

}  // namespace hagemu
