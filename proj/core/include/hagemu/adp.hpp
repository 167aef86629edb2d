#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "hagemu/environment.hpp"
#include "hagemu/linear_model.hpp"
#include "hagemu/tile_coder.hpp"

namespace hagemu {

// Step-size schedule for the stochastic-gradient update. The harmonic form
// value/(1 + k/tau) over update count k satisfies the usual convergence
// conditions (sum = inf, sum of squares < inf).
struct StepSchedule {
  enum class Kind { Constant, Harmonic };
  Kind kind = Kind::Constant;
  double value = 0.1 / 8.0;
  double tau = 1000.0;

  double at(long k) const {
    return kind == Kind::Constant ? value
                                  : value / (1.0 + static_cast<double>(k) / tau);
  }
};

enum class ExpectationMode { ExactEnumeration, MonteCarlo };

struct AdpConfig {
  long episodes = 10000;
  StepSchedule step;
  double smoothing_alpha = 1.0;  // regression-target smoothing; 1 = off
  double discount = 1.0;
  ExpectationMode expectation = ExpectationMode::ExactEnumeration;
  int mc_samples = 100;
  std::uint64_t seed = 42;
  // Randomize the initial security mask over reachable masks each training
  // episode. Greedy forward sampling alone never leaves the argmax
  // trajectory, so off-trajectory values would stay untrained without this.
  bool exploring_starts = true;

  void validate() const;
};

struct Backup {
  double v_hat = 0.0;
  Action action;
};

// One-step lookahead over the available actions: for each action the exact
// success/failure expectation of r + discount * J(successor), with the
// supplied per-slot disturbance plugged into the physical advance
// (MonteCarlo mode instead averages mc_samples fresh draws from *mc_rng).
// The successor value is zero at the last step. Ties take the lowest
// action index.
Backup greedy_backup(const Hag& hag, const Scenario& scenario,
                     const SystemState& state, const ValueWeights& weights,
                     const TileCoderSpec& spec, const AdpConfig& config,
                     const std::vector<double>& planning_w,
                     const EpisodeSetup& setup, Rng* mc_rng = nullptr);

// Uniformly deep random mask on the reachable lattice: start from the entry
// state and apply a random number of random available exploits.
SecurityVector random_reachable_security(const Hag& hag, Rng& rng);

struct TrainStats {
  std::vector<double> episode_return;
  std::vector<double> mean_td_error;
  // Visits per (security mask, t) during training; diagnostics, and the
  // basis for checking learned values only where they were actually fit.
  std::map<std::pair<std::uint64_t, int>, long> visits;
};

struct AdpResult {
  ValueWeights weights;
  TrainStats stats;
};

// Forward-sampled training: per episode, fix a disturbance path, walk the
// model greedily, and regress J(s_t) toward the one-step lookahead target.
AdpResult adp_train(const Hag& hag, const Scenario& scenario,
                    const TileCoderSpec& spec, const AdpConfig& config);

// Greedy one-step lookahead policy for a trained value function, planning
// with the scenario's mean disturbance. Deterministic given (state, setup).
PolicyFn make_adp_policy(const Hag& hag, const Scenario& scenario,
                         ValueWeights weights, TileCoderSpec spec,
                         AdpConfig config);

}  // namespace hagemu
