#include "hagemu/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace hagemu {

namespace fs = std::filesystem;
using nlohmann::json;

void ExperimentConfig::validate() const {
  if (algo != "adp" && algo != "ac" && algo != "greedy")
    raise(ErrorCode::BadConfig, "algo must be adp, ac, or greedy");
  if (scenario != "building" && scenario != "static")
    raise(ErrorCode::BadConfig, "scenario must be building or static");
  if (train_episodes < 0 || test_episodes < 0)
    raise(ErrorCode::BadConfig, "episode counts must be >= 0");
  if (horizon < 1) raise(ErrorCode::BadConfig, "horizon must be >= 1");
  if (ell < 1) raise(ErrorCode::BadConfig, "ell must be >= 1");
  if (scenario == "static" && graph_path.empty())
    raise(ErrorCode::BadConfig, "static scenario requires --graph");
}

Workbench make_workbench(const ExperimentConfig& config) {
  config.validate();
  if (config.scenario == "building") {
    building::BuildingParams params;
    if (!config.scenario_config.empty())
      params = load_building_params(config.scenario_config);
    params.grid_step = config.delta;
    params.horizon = config.horizon;
    auto scenario = std::make_shared<building::BuildingScenario>(params);
    Hag hag = config.graph_path.empty()
                  ? building::build_building_hag(config.delta, params)
                  : load_hag(config.graph_path);
    TileCoderSpec spec = TileCoderSpec::for_scenario(hag, *scenario, config.tiles,
                                                     config.tilings, config.hash_size);
    return Workbench{std::move(hag), std::move(scenario), std::move(spec)};
  }
  auto scenario = std::make_shared<StaticScenario>(config.horizon);
  Hag hag = load_hag(config.graph_path);
  TileCoderSpec spec = TileCoderSpec::for_scenario(hag, *scenario, config.tiles,
                                                   config.tilings, config.hash_size);
  return Workbench{std::move(hag), std::move(scenario), std::move(spec)};
}

namespace {

AdpConfig adp_config_from(const ExperimentConfig& config) {
  AdpConfig c;
  c.episodes = config.train_episodes;
  c.step.value = config.adp_step;
  c.smoothing_alpha = config.smoothing_alpha;
  c.discount = config.discount;
  c.expectation =
      config.mc_samples > 0 ? ExpectationMode::MonteCarlo : ExpectationMode::ExactEnumeration;
  c.mc_samples = config.mc_samples > 0 ? config.mc_samples : 100;
  c.seed = config.seed;
  return c;
}

AcConfig ac_config_from(const ExperimentConfig& config) {
  AcConfig c;
  c.episodes = config.train_episodes;
  c.critic_step = config.ac_critic_step;
  c.actor_step = config.ac_actor_step;
  c.discount = config.discount;
  c.seed = config.seed;
  return c;
}

}  // namespace

WeightsArtifact train_artifact(const Workbench& wb, const ExperimentConfig& config,
                               TrainStats* stats) {
  WeightsArtifact artifact;
  artifact.algo = config.algo;
  artifact.spec = wb.tile_spec;
  artifact.num_nodes = wb.hag.num_nodes();
  artifact.num_edges = wb.hag.num_edges();
  artifact.num_actions = wb.hag.num_actions();
  artifact.seed = config.seed;
  artifact.episodes = config.train_episodes;

  if (config.algo == "adp") {
    AdpResult result = adp_train(wb.hag, *wb.scenario, wb.tile_spec, adp_config_from(config));
    artifact.theta = std::move(result.weights);
    if (stats) *stats = std::move(result.stats);
  } else if (config.algo == "ac") {
    AcResult result = ac_train(wb.hag, *wb.scenario, wb.tile_spec, ac_config_from(config));
    artifact.theta = std::move(result.critic);
    artifact.psi = std::move(result.actor);
    if (stats) *stats = std::move(result.stats);
  } else {
    raise(ErrorCode::BadConfig, "greedy policies are not trained; use eval directly");
  }
  return artifact;
}

PolicyFn policy_from_artifact(const Workbench& wb, const WeightsArtifact& artifact,
                              const ExperimentConfig& config) {
  check_compatible(artifact, wb.hag, wb.tile_spec);
  if (artifact.algo == "adp")
    return make_adp_policy(wb.hag, *wb.scenario, artifact.theta, artifact.spec,
                           adp_config_from(config));
  if (artifact.algo == "ac")
    return make_softmax_policy(wb.hag, artifact.psi, artifact.spec,
                               config.greedy_eval_actor);
  raise(ErrorCode::BadConfig, "unknown artifact algo '" + artifact.algo + "'");
}

PolicyFn make_baseline_policy(const Workbench& wb, const ExperimentConfig& config) {
  PrunedSet pruned = prune(wb.hag, wb.hag.initial_security(), config.ell);
  return make_greedy_policy(wb.hag, *wb.scenario, std::move(pruned), config.reprune);
}

namespace {

// Domain separation between training and evaluation episode streams.
constexpr std::uint64_t kEvalStream = 0x4556414cull;

void episode_rho(const EpisodeTrace& trace, double& numerator, double& denominator) {
  numerator = 0.0;
  denominator = 0.0;
  for (const TraceStep& row : trace.steps) {
    if (!row.action.is_physical()) continue;
    double cost = 0.5 * row.magnitude * row.magnitude;
    numerator += row.reward + cost;
    denominator += cost;
  }
}

}  // namespace

EvalResult evaluate_policy(const Workbench& wb, const PolicyFn& policy,
                           const ExperimentConfig& config, const std::string& algo_name) {
  auto t0 = std::chrono::steady_clock::now();
  const long n = config.test_episodes;
  const long keep = std::min<long>(config.save_traces, n);

  EvalResult result;
  result.rows.resize(static_cast<std::size_t>(n));
  result.sample_traces.resize(static_cast<std::size_t>(keep));

  std::atomic<long> counter{0};
  auto worker = [&] {
    for (long e = counter.fetch_add(1); e < n; e = counter.fetch_add(1)) {
      Rng rng = Rng::child(config.seed ^ kEvalStream, static_cast<std::uint64_t>(e));
      EpisodeSetup setup = wb.scenario->test_setup(rng);
      SystemState s0 = initial_state(wb.hag, *wb.scenario, rng);
      EpisodeTrace trace =
          rollout(wb.hag, *wb.scenario, setup, policy, std::move(s0), rng);

      EvalRow& row = result.rows[static_cast<std::size_t>(e)];
      row.episode = e;
      row.total_reward = trace.total_reward;
      row.time_to_root = trace.time_to_root;
      episode_rho(trace, row.rho_numerator, row.rho_denominator);
      if (e < keep) result.sample_traces[static_cast<std::size_t>(e)] = std::move(trace);
    }
  };

  int nthreads = config.threads > 0
                     ? config.threads
                     : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (n > 0 && nthreads > 1) {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  } else if (n > 0) {
    worker();
  }

  SummaryReport& s = result.summary;
  s.algo = algo_name;
  s.episodes = n;
  double sum = 0.0, sum_sq = 0.0, ttr_sum = 0.0, rho_sum = 0.0;
  long ttr_count = 0;
  for (const EvalRow& row : result.rows) {
    sum += row.total_reward;
    sum_sq += row.total_reward * row.total_reward;
    bool unreached = row.time_to_root > config.horizon;
    if (unreached) ++s.unreached;
    if (!unreached || !config.exclude_unreached) {
      ttr_sum += row.time_to_root;
      ++ttr_count;
    }
    if (row.rho_denominator > 0.0) {
      rho_sum += row.rho_numerator / row.rho_denominator;
      ++s.rho_episodes;
    }
  }
  if (n > 0) {
    s.mean_net_reward = sum / static_cast<double>(n);
    s.var_net_reward =
        n > 1 ? (sum_sq - sum * sum / static_cast<double>(n)) / static_cast<double>(n - 1)
              : 0.0;
  }
  s.mean_time_to_root = ttr_count > 0 ? ttr_sum / static_cast<double>(ttr_count) : 0.0;
  s.mean_rho = s.rho_episodes > 0 ? rho_sum / static_cast<double>(s.rho_episodes) : 0.0;
  s.wall_clock_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

WeightsArtifact cmd_train(const ExperimentConfig& config) {
  Workbench wb = make_workbench(config);
  TrainStats stats;
  WeightsArtifact artifact = train_artifact(wb, config, &stats);
  fs::create_directories(config.out_dir);
  save_weights(artifact, config.out_dir + "/weights_" + config.algo + ".json");
  write_training_curve_csv(stats, config.out_dir + "/training_curve.csv");
  return artifact;
}

EvalResult cmd_eval(const ExperimentConfig& config, const std::string& weights_path) {
  Workbench wb = make_workbench(config);
  PolicyFn policy;
  std::string name = config.algo;
  if (config.algo == "greedy") {
    policy = make_baseline_policy(wb, config);
  } else {
    WeightsArtifact artifact = load_weights(weights_path);
    name = artifact.algo;
    policy = policy_from_artifact(wb, artifact, config);
  }
  EvalResult result = evaluate_policy(wb, policy, config, name);

  fs::create_directories(config.out_dir);
  write_per_episode_csv(result.rows, config.out_dir + "/per_episode.csv");
  write_summary_json(result.summary, config, config.out_dir + "/summary.json");
  for (std::size_t i = 0; i < result.sample_traces.size(); ++i) {
    std::ostringstream name_oss;
    name_oss << config.out_dir << "/trace_" << std::setw(3) << std::setfill('0') << i
             << ".csv";
    write_trace_csv(wb.hag, result.sample_traces[i], name_oss.str());
  }
  return result;
}

std::vector<SweepRow> cmd_sweep(const ExperimentConfig& base,
                                const std::vector<double>& deltas) {
  std::vector<SweepRow> rows;
  for (double delta : deltas) {
    ExperimentConfig config = base;
    config.delta = delta;
    config.graph_path.clear();  // rebuild the grid for each delta

    Workbench wb = make_workbench(config);
    SweepRow row;
    row.delta = delta;
    // The action-count column counts the physical perturbation grid.
    row.num_actions = wb.hag.num_actions() - 1 - wb.hag.num_edges();

    config.algo = "adp";
    WeightsArtifact adp = train_artifact(wb, config);
    SummaryReport s_adp =
        evaluate_policy(wb, policy_from_artifact(wb, adp, config), config, "adp").summary;

    config.algo = "ac";
    WeightsArtifact ac = train_artifact(wb, config);
    SummaryReport s_ac =
        evaluate_policy(wb, policy_from_artifact(wb, ac, config), config, "ac").summary;

    config.algo = "greedy";
    SummaryReport s_greedy =
        evaluate_policy(wb, make_baseline_policy(wb, config), config, "greedy").summary;

    row.mean_adp = s_adp.mean_net_reward;
    row.var_adp = s_adp.var_net_reward;
    row.mean_ac = s_ac.mean_net_reward;
    row.var_ac = s_ac.var_net_reward;
    row.mean_greedy = s_greedy.mean_net_reward;
    row.var_greedy = s_greedy.var_net_reward;
    rows.push_back(row);
  }
  fs::create_directories(base.out_dir);
  write_sweep_csv(rows, base.out_dir + "/sweep.csv");
  return rows;
}

BoundCertificate cmd_greedy_certify(const ExperimentConfig& config) {
  Workbench wb = make_workbench(config);
  return certify_bound(wb.hag, wb.hag.initial_security(), config.ell);
}

std::string inspect_report(const std::string& graph_path) {
  Hag hag = load_hag(graph_path);
  std::ostringstream oss;
  oss << "graph: " << graph_path << "\n";
  oss << "nodes: " << hag.num_nodes() << ", edges: " << hag.num_edges()
      << ", actions: " << hag.num_actions() << " (incl. noop)\n";

  oss << "entry points:";
  for (NodeId id : hag.entry_nodes()) oss << ' ' << id;
  oss << "\nphysical roots:";
  for (NodeId id : hag.physical_nodes()) oss << ' ' << id;
  oss << "\n";

  oss << "edges:\n";
  for (int e = 0; e < hag.num_edges(); ++e) {
    const ExploitEdge& edge = hag.edges()[static_cast<std::size_t>(e)];
    oss << "  [" << e << "] " << edge.from << " -> " << edge.to
        << "  reward=" << edge.reward << " cost=" << edge.cost << " prob=";
    if (edge.success_prob.is_named())
      oss << edge.success_prob.name();
    else
      oss << edge.success_prob.at(0);
    oss << "\n";
  }

  SecurityVector s0 = hag.initial_security();
  oss << "initial exploits (B_0):\n";
  for (int e : hag.available_edges(s0)) {
    const ExploitEdge& edge = hag.edges()[static_cast<std::size_t>(e)];
    std::vector<int> r = hag.reachable_actions(hag.exploit_action(e));
    oss << "  e" << edge.from << "-" << edge.to << "  |R_a|=" << r.size()
        << "  Q(a,s0)=" << path_value(hag, e) << "  R_a={";
    for (std::size_t i = 0; i < r.size(); ++i) {
      const ExploitEdge& re = hag.edges()[static_cast<std::size_t>(r[i])];
      oss << (i ? ", " : "") << re.from << "->" << re.to;
    }
    oss << "}\n";
  }
  return oss.str();
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) raise(ErrorCode::ParseError, "cannot write '" + path + "'");
  out << std::setprecision(17);
  return out;
}

}  // namespace

void write_trace_csv(const Hag& hag, const EpisodeTrace& trace, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "t,zone_temp,measured_temp,outside_temp,action,success,reward,supply_temp,"
         "airflow,security_mask\n";
  for (const TraceStep& row : trace.steps) {
    out << row.t << ',' << row.zone_temp << ',' << row.measured_temp << ','
        << row.outside_temp << ',' << hag.action_label(row.action) << ','
        << (row.success ? 1 : 0) << ',' << row.reward << ',' << row.control.supply << ','
        << row.control.airflow << ',' << row.security_mask << '\n';
  }
}

void write_per_episode_csv(const std::vector<EvalRow>& rows, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "episode,total_reward,time_to_root,rho_numerator,rho_denominator\n";
  for (const EvalRow& row : rows)
    out << row.episode << ',' << row.total_reward << ',' << row.time_to_root << ','
        << row.rho_numerator << ',' << row.rho_denominator << '\n';
}

void write_training_curve_csv(const TrainStats& stats, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "episode,return,mean_td_error\n";
  for (std::size_t e = 0; e < stats.episode_return.size(); ++e)
    out << e << ',' << stats.episode_return[e] << ',' << stats.mean_td_error[e] << '\n';
}

void write_summary_json(const SummaryReport& summary, const ExperimentConfig& config,
                        const std::string& path) {
  json doc;
  doc["algo"] = summary.algo;
  doc["episodes"] = summary.episodes;
  doc["mean_net_reward"] = summary.mean_net_reward;
  doc["var_net_reward"] = summary.var_net_reward;
  doc["mean_time_to_root"] = summary.mean_time_to_root;
  doc["unreached_episodes"] = summary.unreached;
  doc["mean_rho"] = summary.mean_rho;
  doc["rho_episodes"] = summary.rho_episodes;
  doc["wall_clock_sec"] = summary.wall_clock_sec;
  doc["config"] = {
      {"graph", config.graph_path},
      {"scenario", config.scenario},
      {"algo", config.algo},
      {"train_episodes", config.train_episodes},
      {"test_episodes", config.test_episodes},
      {"horizon", config.horizon},
      {"delta", config.delta},
      {"ell", config.ell},
      {"seed", config.seed},
      {"tilings", config.tilings},
      {"tiles", config.tiles},
      {"hash_size", config.hash_size},
      {"greedy_eval_actor", config.greedy_eval_actor},
      {"exclude_unreached", config.exclude_unreached},
      {"reprune", config.reprune},
  };
  std::ofstream out = open_out(path);
  out << doc.dump(2) << "\n";
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "delta,num_actions,mean_adp,mean_ac,mean_greedy,var_adp,var_ac,var_greedy\n";
  for (const SweepRow& row : rows)
    out << row.delta << ',' << row.num_actions << ',' << row.mean_adp << ','
        << row.mean_ac << ',' << row.mean_greedy << ',' << row.var_adp << ','
        << row.var_ac << ',' << row.var_greedy << '\n';
}

}  // namespace hagemu
