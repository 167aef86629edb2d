#pragma once

#include <vector>

#include "hagemu/attack_graph.hpp"
#include "hagemu/tile_coder.hpp"

namespace hagemu {

// Linear state-value function over tile features: J(s) = sum of theta at
// the active indices. The gradient w.r.t. theta is the indicator vector of
// those indices.
struct ValueWeights {
  std::vector<double> theta;

  explicit ValueWeights(std::uint32_t d = 0) : theta(d, 0.0) {}
};

double value(const ValueWeights& weights, const FeatureVec& features);

// theta += scale on every active index. Raises DivergedWeights when an
// updated entry becomes non-finite.
void add_scaled(ValueWeights& weights, const FeatureVec& features, double scale);

// One stochastic-gradient step of 1/2 (J - target)^2:
// theta += step * (target - J) * gradJ. Returns the TD gap (target - J)
// measured before the update.
double sgd_update(ValueWeights& weights, const FeatureVec& features, double target,
                  double step);

// Softmax policy with one preference weight vector per action over the same
// state features: h(s,a) = sum of psi[a] at the active indices.
struct PreferenceWeights {
  int num_actions = 0;
  std::uint32_t d = 0;
  std::vector<double> psi;  // row-major num_actions x d

  PreferenceWeights() = default;
  PreferenceWeights(int actions, std::uint32_t dim)
      : num_actions(actions), d(dim),
        psi(static_cast<std::size_t>(actions) * dim, 0.0) {}

  double& at(int action, std::uint32_t i) {
    return psi[static_cast<std::size_t>(action) * d + i];
  }
  double at(int action, std::uint32_t i) const {
    return psi[static_cast<std::size_t>(action) * d + i];
  }
};

double preference(const PreferenceWeights& prefs, const FeatureVec& features,
                  int action_index);

// pi(a|s) over the given (non-empty) action set, computed with
// max-subtraction so large preferences cannot overflow. Probabilities are
// aligned with `actions` and sum to 1.
std::vector<double> softmax_policy(const PreferenceWeights& prefs,
                                   const FeatureVec& features,
                                   const std::vector<Action>& actions);

// Gradient of ln pi(chosen|s) w.r.t. psi. For linear preferences the row
// for action b carries coefficient (1{b == chosen} - pi(b|s)) on the state
// features; rows of actions outside the set are zero.
struct LogPolicyGradient {
  FeatureVec features;
  std::vector<std::pair<int, double>> coefficients;  // (global action index, coeff)
};

LogPolicyGradient log_policy_gradient(const PreferenceWeights& prefs,
                                      const FeatureVec& features,
                                      const std::vector<Action>& actions,
                                      const Action& chosen);

// psi += scale * grad. Raises DivergedWeights on non-finite entries.
void add_scaled(PreferenceWeights& prefs, const LogPolicyGradient& grad, double scale);

}  // namespace hagemu
