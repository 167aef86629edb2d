#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hagemu/actor_critic.hpp"
#include "hagemu/adp.hpp"
#include "hagemu/greedy.hpp"
#include "hagemu/serialization.hpp"

namespace hagemu {

// Every knob of one experiment run. Desk-scale defaults: 10k training and
// 2k test episodes; the paper-scale counts stay reachable through flags.
struct ExperimentConfig {
  std::string graph_path;             // empty: build the building graph
  std::string scenario = "building";  // "building" or "static"
  std::string scenario_config;        // optional TOML overriding BuildingParams
  std::string algo = "adp";           // adp | ac | greedy
  long train_episodes = 10000;
  long test_episodes = 2000;
  int horizon = 48;
  double delta = 1.0;  // physical action grid step
  int ell = 2;         // pruning budget
  std::uint64_t seed = 42;
  std::string out_dir = "out";
  bool greedy_eval_actor = false;  // argmax instead of sampling AC policies
  bool exclude_unreached = false;  // drop sentinels from mean time-to-root
  bool reprune = false;            // re-run pruning at every step
  int save_traces = 3;
  int threads = 0;  // 0 = hardware concurrency

  // Function approximation and solver knobs.
  int tilings = 8;
  int tiles = 8;
  std::uint32_t hash_size = 1u << 15;
  double adp_step = 0.1 / 8.0;
  double smoothing_alpha = 1.0;
  double ac_critic_step = 0.1 / 8.0;
  double ac_actor_step = 0.01 / 8.0;
  double discount = 1.0;
  int mc_samples = 0;  // 0 = exact enumeration in the lookahead

  void validate() const;
};

// Graph + scenario + tile spec assembled from a config.
struct Workbench {
  Hag hag;
  std::shared_ptr<Scenario> scenario;
  TileCoderSpec tile_spec;
};

Workbench make_workbench(const ExperimentConfig& config);

struct EvalRow {
  long episode = 0;
  double total_reward = 0.0;
  int time_to_root = 0;
  double rho_numerator = 0.0;
  double rho_denominator = 0.0;
};

struct SummaryReport {
  std::string algo;
  long episodes = 0;
  double mean_net_reward = 0.0;
  double var_net_reward = 0.0;  // sample variance
  double mean_time_to_root = 0.0;
  long unreached = 0;           // episodes that never touched a root
  double mean_rho = 0.0;        // over episodes with positive attack cost
  long rho_episodes = 0;
  double wall_clock_sec = 0.0;
};

struct EvalResult {
  std::vector<EvalRow> rows;
  std::vector<EpisodeTrace> sample_traces;
  SummaryReport summary;
};

// Training and policy construction against an assembled workbench.
WeightsArtifact train_artifact(const Workbench& wb, const ExperimentConfig& config,
                               TrainStats* stats = nullptr);
PolicyFn policy_from_artifact(const Workbench& wb, const WeightsArtifact& artifact,
                              const ExperimentConfig& config);
PolicyFn make_baseline_policy(const Workbench& wb, const ExperimentConfig& config);

// Frozen-policy evaluation over test episodes on independent rng streams
// (episodes run in parallel; results do not depend on scheduling).
EvalResult evaluate_policy(const Workbench& wb, const PolicyFn& policy,
                           const ExperimentConfig& config, const std::string& algo_name);

// CLI-facing commands; these write artifacts under config.out_dir.
WeightsArtifact cmd_train(const ExperimentConfig& config);
EvalResult cmd_eval(const ExperimentConfig& config, const std::string& weights_path);

struct SweepRow {
  double delta = 0.0;
  int num_actions = 0;
  double mean_adp = 0.0, mean_ac = 0.0, mean_greedy = 0.0;
  double var_adp = 0.0, var_ac = 0.0, var_greedy = 0.0;
};
std::vector<SweepRow> cmd_sweep(const ExperimentConfig& config,
                                const std::vector<double>& deltas);

BoundCertificate cmd_greedy_certify(const ExperimentConfig& config);
std::string inspect_report(const std::string& graph_path);

// Artifact writers (full precision; every summary statistic is
// recomputable from the per-episode rows).
void write_trace_csv(const Hag& hag, const EpisodeTrace& trace, const std::string& path);
void write_per_episode_csv(const std::vector<EvalRow>& rows, const std::string& path);
void write_training_curve_csv(const TrainStats& stats, const std::string& path);
void write_summary_json(const SummaryReport& summary, const ExperimentConfig& config,
                        const std::string& path);
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

}  // namespace hagemu
