#include "hagemu/linear_model.hpp"

#include <algorithm>
#include <cmath>

namespace hagemu {

double value(const ValueWeights& weights, const FeatureVec& features) {
  double sum = 0.0;
  for (std::uint32_t i : features) {
    if (i >= weights.theta.size())
      raise(ErrorCode::IndexOutOfRange, "feature index " + std::to_string(i) +
                                            " >= d=" + std::to_string(weights.theta.size()));
    sum += weights.theta[i];
  }
  return sum;
}

void add_scaled(ValueWeights& weights, const FeatureVec& features, double scale) {
  for (std::uint32_t i : features) {
    if (i >= weights.theta.size())
      raise(ErrorCode::IndexOutOfRange, "feature index out of range");
    weights.theta[i] += scale;
    if (!std::isfinite(weights.theta[i]))
      raise(ErrorCode::DivergedWeights, "value weight diverged at index " + std::to_string(i));
  }
}

double sgd_update(ValueWeights& weights, const FeatureVec& features, double target,
                  double step) {
  double gap = target - value(weights, features);
  add_scaled(weights, features, step * gap);
  return gap;
}

double preference(const PreferenceWeights& prefs, const FeatureVec& features,
                  int action_index) {
  double sum = 0.0;
  for (std::uint32_t i : features) {
    if (i >= prefs.d)
      raise(ErrorCode::IndexOutOfRange, "feature index out of range");
    sum += prefs.at(action_index, i);
  }
  return sum;
}

std::vector<double> softmax_policy(const PreferenceWeights& prefs,
                                   const FeatureVec& features,
                                   const std::vector<Action>& actions) {
  if (actions.empty())
    raise(ErrorCode::IllegalAction, "softmax over empty action set");
  std::vector<double> h(actions.size());
  for (std::size_t k = 0; k < actions.size(); ++k)
    h[k] = preference(prefs, features, actions[k].global_index);
  double hmax = *std::max_element(h.begin(), h.end());
  double total = 0.0;
  for (double& v : h) {
    v = std::exp(v - hmax);
    total += v;
  }
  for (double& v : h) v /= total;
  return h;
}

LogPolicyGradient log_policy_gradient(const PreferenceWeights& prefs,
                                      const FeatureVec& features,
                                      const std::vector<Action>& actions,
                                      const Action& chosen) {
  std::vector<double> pi = softmax_policy(prefs, features, actions);
  LogPolicyGradient grad;
  grad.features = features;
  grad.coefficients.reserve(actions.size());
  bool found = false;
  for (std::size_t k = 0; k < actions.size(); ++k) {
    double indicator = actions[k] == chosen ? 1.0 : 0.0;
    found |= indicator > 0.0;
    grad.coefficients.emplace_back(actions[k].global_index, indicator - pi[k]);
  }
  if (!found)
    raise(ErrorCode::UnknownAction, "chosen action not in the action set");
  return grad;
}

void add_scaled(PreferenceWeights& prefs, const LogPolicyGradient& grad, double scale) {
  if (scale == 0.0) return;
  for (const auto& [action, coeff] : grad.coefficients) {
    for (std::uint32_t i : grad.features) {
      double& w = prefs.at(action, i);
      w += scale * coeff;
      if (!std::isfinite(w))
        raise(ErrorCode::DivergedWeights, "preference weight diverged");
    }
  }
}

}  // namespace hagemu
