#include <doctest.h>

#include <cmath>

#include "hagemu/building.hpp"
#include "hagemu/environment.hpp"
#include "test_support.hpp"

using namespace hagemu;

namespace {

// First available exploit, noop once nothing is available.
PolicyFn first_exploit_policy(const Hag& hag) {
  return [&hag](const SystemState& s, const EpisodeSetup&, Rng&) {
    auto avail = hag.available_edges(s.security);
    return avail.empty() ? hag.noop() : hag.exploit_action(avail.front());
  };
}

}  // namespace

TEST_CASE("step reward branches") {
  StaticScenario scenario(8);

  SUBCASE("deterministic success") {
    Hag hag = test::chain_graph(1.0, 1.0);
    Rng rng(0);
    SystemState s0 = initial_state(hag, scenario, rng);
    StepResult r = step(hag, scenario, {}, s0, hag.exploit_action(0), rng);
    CHECK(r.success);
    CHECK(r.reward == doctest::Approx(0.9));
    CHECK(r.next.security[1] == 1);
    CHECK(r.next.t == 1);
  }
  SUBCASE("deterministic failure") {
    Hag hag = test::chain_graph(0.0, 1.0);
    Rng rng(0);
    SystemState s0 = initial_state(hag, scenario, rng);
    StepResult r = step(hag, scenario, {}, s0, hag.exploit_action(0), rng);
    CHECK_FALSE(r.success);
    CHECK(r.reward == doctest::Approx(-0.1));
    CHECK(r.next.security == s0.security);
  }
  SUBCASE("noop yields the noop reward and changes no bits") {
    Hag hag = test::chain_graph();
    Rng rng(0);
    SystemState s0 = initial_state(hag, scenario, rng);
    StepResult r = step(hag, scenario, {}, s0, hag.noop(), rng);
    CHECK(r.reward == 0.0);
    CHECK(r.next.security == s0.security);
  }
  SUBCASE("successful physical action is rewarded per the scenario") {
    building::BuildingParams params;
    params.horizon = 8;
    building::BuildingScenario building_scenario(params);
    Hag hag = building::build_building_hag(1.0, params);
    SecurityVector all(5, 1);

    Rng rng(0);
    SystemState s0 = initial_state(hag, building_scenario, rng);
    s0.security = all;
    s0.physical[0] = 24.0;

    Action plus2 = hag.action(1 + 5 + 4);
    Disturbance d{0.0, {24.0}};  // force success, calm outside air
    StepResult r = step(hag, building_scenario, s0, plus2, d);
    CHECK(r.success);
    // y = 26 -> cooling at full blast -> x' = 24 - 0.9 + 0 = 23.1, in band
    CHECK(r.next.physical[0] == doctest::Approx(23.1));
    CHECK(r.reward == doctest::Approx(building::net_reward(2.0, true, 23.1)));
  }
  SUBCASE("illegal actions are rejected") {
    Hag hag = test::chain_graph();
    Rng rng(0);
    SystemState s0 = initial_state(hag, scenario, rng);
    CHECK_THROWS_AS((void)step(hag, scenario, {}, s0, hag.exploit_action(1), rng),
                    HagError);  // (2,3) needs node 2
  }
  SUBCASE("horizon is enforced") {
    Hag hag = test::chain_graph();
    Rng rng(0);
    SystemState s0 = initial_state(hag, scenario, rng);
    s0.t = 8;
    CHECK_THROWS_AS((void)step(hag, scenario, {}, s0, hag.noop(), rng), HagError);
  }
}

TEST_CASE("initial state") {
  SUBCASE("entry bits set, physical sampled in bounds") {
    building::BuildingParams params;
    building::BuildingScenario scenario(params);
    Hag hag = building::build_building_hag(1.0, params);
    Rng rng(123);
    SystemState s0 = initial_state(hag, scenario, rng);
    CHECK(s0.security == SecurityVector{1, 0, 0, 0, 0});
    CHECK(s0.physical[0] >= 23.0);
    CHECK(s0.physical[0] <= 25.0);
  }
  SUBCASE("different seeds draw different temperatures") {
    building::BuildingScenario scenario{building::BuildingParams{}};
    Hag hag = building::build_building_hag(1.0);
    Rng a(1), b(2);
    CHECK(initial_state(hag, scenario, a).physical[0] !=
          initial_state(hag, scenario, b).physical[0]);
  }
  SUBCASE("static scenario pins the state") {
    StaticScenario scenario(8, 0.25);
    Hag hag = test::chain_graph();
    Rng rng(7);
    CHECK(initial_state(hag, scenario, rng).physical[0] == 0.25);
  }
}

TEST_CASE("rollout") {
  SUBCASE("always-noop trajectory has zero total reward") {
    building::BuildingParams params;  // horizon 48
    building::BuildingScenario scenario(params);
    Hag hag = building::build_building_hag(1.0, params);
    Rng rng(5);
    PolicyFn noop = [&hag](const SystemState&, const EpisodeSetup&, Rng&) {
      return hag.noop();
    };
    EpisodeTrace trace =
        rollout(hag, scenario, scenario.test_setup(rng), noop,
                initial_state(hag, scenario, rng), rng);
    CHECK(trace.steps.size() == 48);
    CHECK(trace.total_reward == 0.0);
    CHECK(trace.time_to_root == 49);  // sentinel: horizon + 1
  }
  SUBCASE("deterministic chain reaches the root at t = 4") {
    building::BuildingParams params;
    params.horizon = 10;
    building::BuildingScenario scenario(params);
    Hag hag = building::build_building_hag(1.0, params);
    // All exploits certain: rebuild with prob 1.
    std::vector<Node> nodes(hag.nodes().begin(), hag.nodes().end());
    std::vector<ExploitEdge> edges;
    for (ExploitEdge e : hag.edges()) {
      e.success_prob = SuccessProb::constant(1.0);
      edges.push_back(e);
    }
    Hag sure(std::move(nodes), std::move(edges));

    Rng rng(0);
    EpisodeTrace trace =
        rollout(sure, scenario, {}, first_exploit_policy(sure),
                initial_state(sure, scenario, rng), rng);
    CHECK(trace.time_to_root == 4);  // path 1->2->3->4->5
    CHECK(trace.steps[0].security_mask == 0b1);
    CHECK(trace.steps[4].security_mask == 0b11111);
  }
  SUBCASE("fixed seed reproduces the trace bit for bit") {
    building::BuildingScenario scenario{building::BuildingParams{}};
    Hag hag = building::build_building_hag(1.0);
    auto run = [&] {
      Rng rng(99);
      return rollout(hag, scenario, scenario.test_setup(rng),
                     first_exploit_policy(hag), initial_state(hag, scenario, rng),
                     rng);
    };
    EpisodeTrace a = run(), b = run();
    REQUIRE(a.steps.size() == b.steps.size());
    CHECK(a.total_reward == b.total_reward);
    for (std::size_t i = 0; i < a.steps.size(); ++i) {
      CHECK(a.steps[i].zone_temp == b.steps[i].zone_temp);
      CHECK(a.steps[i].outside_temp == b.steps[i].outside_temp);
      CHECK(a.steps[i].reward == b.steps[i].reward);
      CHECK(a.steps[i].security_mask == b.steps[i].security_mask);
    }
  }
}

TEST_CASE("security bits are monotone along rollouts") {
  Rng seed_rng(2024);
  StaticScenario scenario(12);
  for (int trial = 0; trial < 200; ++trial) {
    Hag hag = test::random_dag(seed_rng);
    Rng rng(seed_rng.next());
    PolicyFn random_policy = [&hag](const SystemState& s, const EpisodeSetup&, Rng& r) {
      auto space = hag.action_space(s.security);
      return space[r.uniform_int(space.size())];
    };
    EpisodeTrace trace = rollout(hag, scenario, {}, random_policy,
                                 initial_state(hag, scenario, rng), rng);
    for (std::size_t i = 1; i < trace.steps.size(); ++i) {
      std::uint64_t prev = trace.steps[i - 1].security_mask;
      std::uint64_t curr = trace.steps[i].security_mask;
      CHECK((prev & ~curr) == 0);  // no bit ever clears
    }
  }
}

TEST_CASE("empirical exploit success frequency matches the edge probability") {
  const double phi = 0.3;
  Hag hag = test::chain_graph(phi, 1.0);
  StaticScenario scenario(2);
  Rng rng(31337);
  SystemState s0 = initial_state(hag, scenario, rng);

  const int trials = 10000;
  int successes = 0;
  for (int i = 0; i < trials; ++i)
    successes += step(hag, scenario, {}, s0, hag.exploit_action(0), rng).success;

  double freq = static_cast<double>(successes) / trials;
  double sigma = std::sqrt(phi * (1.0 - phi) / trials);
  CHECK(std::abs(freq - phi) <= 3.0 * sigma);
}

TEST_CASE("with certain exploits and no noise, rollouts agree across seeds") {
  Hag hag = test::chain_graph(1.0, 1.0);
  StaticScenario scenario(6);
  auto run = [&](std::uint64_t seed) {
    Rng rng(seed);
    return rollout(hag, scenario, {}, first_exploit_policy(hag),
                   initial_state(hag, scenario, rng), rng);
  };
  EpisodeTrace a = run(1), b = run(20250607);
  CHECK(a.total_reward == b.total_reward);
  CHECK(a.time_to_root == b.time_to_root);
  for (std::size_t i = 0; i < a.steps.size(); ++i)
    CHECK(a.steps[i].security_mask == b.steps[i].security_mask);
}
