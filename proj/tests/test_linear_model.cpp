#include <doctest.h>

#include <cmath>

#include "hagemu/linear_model.hpp"
#include "test_support.hpp"

using namespace hagemu;

namespace {

TileCoderSpec small_spec() {
  TileCoderSpec spec;
  spec.num_tilings = 8;
  spec.tiles_per_dim = {8};
  spec.state_bounds = {{0.0, 1.0}};
  spec.include_time = true;
  spec.horizon = 8;
  spec.hash_size = 1u << 12;
  return spec;
}

// ln pi(chosen) evaluated directly, for finite-difference checks.
double log_pi(const PreferenceWeights& prefs, const FeatureVec& feats,
              const std::vector<Action>& actions, const Action& chosen) {
  std::vector<double> pi = softmax_policy(prefs, feats, actions);
  for (std::size_t k = 0; k < actions.size(); ++k)
    if (actions[k] == chosen) return std::log(pi[k]);
  return -1e300;
}

}  // namespace

TEST_CASE("linear value basics") {
  TileCoderSpec spec = small_spec();
  FeatureVec feats = tile_features(spec, 0b1, {0.3}, 2);

  ValueWeights weights(spec.hash_size);
  CHECK(value(weights, feats) == 0.0);

  ValueWeights ones(spec.hash_size);
  for (double& w : ones.theta) w = 1.0;
  CHECK(value(ones, feats) == doctest::Approx(8.0));

  SUBCASE("one SGD step from zero moves value by tilings * step * target") {
    double target = 2.5, step = 0.01;
    sgd_update(weights, feats, target, step);
    CHECK(value(weights, feats) == doctest::Approx(8 * step * target));
  }
  SUBCASE("update toward the current value is a no-op") {
    sgd_update(weights, feats, 1.0, 0.1);
    double v = value(weights, feats);
    ValueWeights before = weights;
    sgd_update(weights, feats, v, 0.1);
    CHECK(weights.theta == before.theta);
  }
  SUBCASE("repeated updates contract geometrically") {
    double target = 1.0, step = 0.1;  // contraction factor 1 - 0.8
    double expected_gap = 1.0;
    for (int i = 0; i < 5; ++i) {
      sgd_update(weights, feats, target, step);
      expected_gap *= 1.0 - step * 8;
      CHECK(target - value(weights, feats) == doctest::Approx(expected_gap));
    }
  }
  SUBCASE("gap strictly shrinks whenever step * tilings < 2") {
    for (double step : {0.01, 0.1, 0.2, 0.24}) {
      ValueWeights w(spec.hash_size);
      sgd_update(w, feats, 1.0, step);
      double before = 1.0;
      double after = std::abs(1.0 - value(w, feats));
      CHECK(after < before);
    }
  }
  SUBCASE("value gradient is the active-tile indicator: finite differences") {
    ValueWeights w(spec.hash_size);
    Rng rng(17);
    for (double& x : w.theta) x = rng.uniform(-1.0, 1.0);
    const double h = 1e-6;
    for (std::uint32_t i : feats) {
      ValueWeights plus = w, minus = w;
      plus.theta[i] += h;
      minus.theta[i] -= h;
      double fd = (value(plus, feats) - value(minus, feats)) / (2 * h);
      CHECK(fd == doctest::Approx(1.0).epsilon(1e-9));
    }
    // an inactive index
    std::uint32_t inactive = 0;
    while (std::find(feats.begin(), feats.end(), inactive) != feats.end()) ++inactive;
    ValueWeights plus = w;
    plus.theta[inactive] += h;
    CHECK(value(plus, feats) == doctest::Approx(value(w, feats)).epsilon(1e-12));
  }
  SUBCASE("non-finite updates are detected") {
    CHECK_THROWS_AS(add_scaled(weights, feats, std::nan("")), HagError);
  }
}

TEST_CASE("softmax policy") {
  TileCoderSpec spec = small_spec();
  Hag hag = test::fig1_graph();
  FeatureVec feats = tile_features(spec, 0b1, {0.5}, 0);
  std::vector<Action> actions;
  for (int e = 0; e < 5; ++e) actions.push_back(hag.exploit_action(e));

  SUBCASE("zero preferences are uniform") {
    PreferenceWeights prefs(hag.num_actions(), spec.hash_size);
    std::vector<double> pi = softmax_policy(prefs, feats, actions);
    for (double p : pi) CHECK(p == doctest::Approx(0.2).epsilon(1e-12));
  }
  SUBCASE("extreme preferences do not overflow") {
    PreferenceWeights prefs(hag.num_actions(), spec.hash_size);
    for (std::uint32_t i : feats) prefs.at(actions[0].global_index, i) = 125.0;
    std::vector<double> pi = softmax_policy(prefs, feats, {actions[0], actions[1]});
    CHECK(std::isfinite(pi[0]));
    CHECK(pi[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(pi[1] == doctest::Approx(0.0).epsilon(1e-9));
  }
  SUBCASE("shift invariance") {
    Rng rng(3);
    PreferenceWeights prefs(hag.num_actions(), spec.hash_size);
    for (double& w : prefs.psi) w = rng.uniform(-0.5, 0.5);
    std::vector<double> before = softmax_policy(prefs, feats, actions);
    for (const Action& a : actions)
      for (std::uint32_t i : feats) prefs.at(a.global_index, i) += 0.37;
    std::vector<double> after = softmax_policy(prefs, feats, actions);
    for (std::size_t k = 0; k < before.size(); ++k)
      CHECK(before[k] == doctest::Approx(after[k]).epsilon(1e-12));
  }
  SUBCASE("probabilities sum to one over random preferences") {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
      PreferenceWeights prefs(hag.num_actions(), spec.hash_size);
      for (double& w : prefs.psi) w = rng.uniform(-3.0, 3.0);
      std::vector<double> pi = softmax_policy(prefs, feats, actions);
      double total = 0.0;
      for (double p : pi) total += p;
      CHECK(std::abs(total - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("log policy gradient") {
  TileCoderSpec spec = small_spec();
  Hag hag = test::fig1_graph();
  FeatureVec feats = tile_features(spec, 0b1, {0.5}, 0);
  std::vector<Action> actions;
  for (int e = 0; e < 4; ++e) actions.push_back(hag.exploit_action(e));

  SUBCASE("matches finite differences") {
    Rng rng(23);
    PreferenceWeights prefs(hag.num_actions(), spec.hash_size);
    for (double& w : prefs.psi) w = rng.uniform(-1.0, 1.0);
    const Action& chosen = actions[2];
    LogPolicyGradient grad = log_policy_gradient(prefs, feats, actions, chosen);

    const double h = 1e-6;
    for (const auto& [action, coeff] : grad.coefficients) {
      std::uint32_t i = feats[1];
      PreferenceWeights plus = prefs, minus = prefs;
      plus.at(action, i) += h;
      minus.at(action, i) -= h;
      double fd = (log_pi(plus, feats, actions, chosen) -
                   log_pi(minus, feats, actions, chosen)) /
                  (2 * h);
      CHECK(fd == doctest::Approx(coeff).epsilon(1e-5));
    }
  }
  SUBCASE("single-action set has zero gradient") {
    PreferenceWeights prefs(hag.num_actions(), spec.hash_size);
    LogPolicyGradient grad =
        log_policy_gradient(prefs, feats, {actions[0]}, actions[0]);
    for (const auto& [action, coeff] : grad.coefficients)
      CHECK(coeff == doctest::Approx(0.0).epsilon(1e-15));
  }
  SUBCASE("zero preferences, two actions: coefficient 1/2 on the chosen side") {
    PreferenceWeights prefs(hag.num_actions(), spec.hash_size);
    LogPolicyGradient grad =
        log_policy_gradient(prefs, feats, {actions[0], actions[1]}, actions[0]);
    CHECK(grad.coefficients[0].second == doctest::Approx(0.5));
    CHECK(grad.coefficients[1].second == doctest::Approx(-0.5));
  }
  SUBCASE("score function has zero mean under the policy") {
    Rng rng(29);
    PreferenceWeights prefs(hag.num_actions(), spec.hash_size);
    for (double& w : prefs.psi) w = rng.uniform(-2.0, 2.0);
    std::vector<double> pi = softmax_policy(prefs, feats, actions);

    // E_pi[grad ln pi] accumulated per (action row) coefficient.
    std::vector<double> mean(actions.size(), 0.0);
    for (std::size_t k = 0; k < actions.size(); ++k) {
      LogPolicyGradient grad = log_policy_gradient(prefs, feats, actions, actions[k]);
      for (std::size_t row = 0; row < actions.size(); ++row)
        mean[row] += pi[k] * grad.coefficients[row].second;
    }
    for (double m : mean) CHECK(std::abs(m) <= 1e-12);
  }
  SUBCASE("chosen action must belong to the set") {
    PreferenceWeights prefs(hag.num_actions(), spec.hash_size);
    CHECK_THROWS_AS((void)log_policy_gradient(prefs, feats, actions, hag.noop()),
                    HagError);
  }
}
