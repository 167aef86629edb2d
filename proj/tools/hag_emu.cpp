// hag-emu: train, evaluate, and inspect attack policies over hybrid attack
// graphs. Subcommands: train, eval, sweep, greedy, inspect.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hagemu/experiment.hpp"

namespace {

using hagemu::ExperimentConfig;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("HAGEMU_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      std::cerr << "warning: ignoring non-numeric HAGEMU_SEED\n";
    }
  }
  return 42;
}

void add_common_flags(CLI::App* cmd, ExperimentConfig& config) {
  cmd->add_option("--graph", config.graph_path, "graph file (.hag.json)");
  cmd->add_option("--scenario", config.scenario, "scenario name (building|static)");
  cmd->add_option("--scenario-config", config.scenario_config,
                  "TOML file overriding the building parameters");
  cmd->add_option("--episodes", config.train_episodes, "training episodes");
  cmd->add_option("--test-episodes", config.test_episodes, "test episodes");
  cmd->add_option("--horizon", config.horizon, "attack horizon T");
  cmd->add_option("--delta", config.delta, "physical action grid step");
  cmd->add_option("--ell", config.ell, "pruning budget");
  cmd->add_option("--seed", config.seed, "master seed (HAGEMU_SEED fallback)");
  cmd->add_option("--out", config.out_dir, "output directory");
  cmd->add_option("--threads", config.threads, "evaluation threads (0 = hardware)");
  cmd->add_option("--tilings", config.tilings, "number of tilings");
  cmd->add_option("--tiles", config.tiles, "tiles per continuous dimension");
  cmd->add_option("--adp-step", config.adp_step, "ADP SGD step size");
  cmd->add_option("--critic-step", config.ac_critic_step, "actor-critic critic step");
  cmd->add_option("--actor-step", config.ac_actor_step, "actor-critic actor step");
  cmd->add_option("--discount", config.discount, "discount factor");
  cmd->add_option("--mc-samples", config.mc_samples,
                  "Monte Carlo lookahead samples (0 = exact enumeration)");
  cmd->add_option("--save-traces", config.save_traces, "sample trace CSVs to keep");
}

int run(int argc, char** argv) {
  CLI::App app{"adversary emulation over hybrid attack graphs"};
  app.require_subcommand(1);

  ExperimentConfig config;
  config.seed = default_seed();

  auto* train = app.add_subcommand("train", "train an attack policy (adp|ac)");
  add_common_flags(train, config);
  train->add_option("--algo", config.algo, "adp or ac")->required();

  auto* eval = app.add_subcommand("eval", "evaluate a frozen policy");
  add_common_flags(eval, config);
  std::string weights_path;
  eval->add_option("--algo", config.algo, "adp, ac, or greedy");
  eval->add_option("--weights", weights_path, "weights artifact (adp/ac)");
  eval->add_flag("--greedy-eval", config.greedy_eval_actor,
                 "evaluate AC policies by softmax argmax instead of sampling");
  eval->add_flag("--exclude-unreached", config.exclude_unreached,
                 "exclude never-reached episodes from mean time-to-root");
  eval->add_flag("--reprune", config.reprune, "re-run greedy pruning every step");

  auto* sweep = app.add_subcommand("sweep", "train and evaluate across grid steps");
  add_common_flags(sweep, config);
  std::vector<double> deltas{1.0, 1.0 / 3.0, 1.0 / 5.0, 1.0 / 7.0, 1.0 / 9.0};
  sweep->add_option("--deltas", deltas, "grid steps to sweep");

  auto* greedy = app.add_subcommand("greedy", "greedy pruning and bound certificate");
  add_common_flags(greedy, config);
  bool certify = false;
  greedy->add_flag("--certify", certify,
                   "compare against exhaustive subset enumeration");

  auto* inspect = app.add_subcommand("inspect", "print a graph report");
  std::string inspect_path;
  inspect->add_option("graph", inspect_path, "graph file")->required();

  CLI11_PARSE(app, argc, argv);

  if (train->parsed()) {
    if (config.algo != "adp" && config.algo != "ac") {
      std::cerr << "train supports --algo adp|ac\n";
      return 1;
    }
    if (config.train_episodes == 0)
      std::cerr << "warning: --episodes 0 writes a zero-weight artifact\n";
    hagemu::cmd_train(config);
    std::cout << "wrote " << config.out_dir << "/weights_" << config.algo
              << ".json and training_curve.csv\n";
    return 0;
  }

  if (eval->parsed()) {
    if (config.algo != "greedy" && weights_path.empty()) {
      std::cerr << "eval needs --weights for adp/ac policies\n";
      return 1;
    }
    hagemu::EvalResult result = hagemu::cmd_eval(config, weights_path);
    const hagemu::SummaryReport& s = result.summary;
    std::cout << "algo=" << s.algo << " episodes=" << s.episodes
              << "\nmean_net_reward=" << s.mean_net_reward
              << " var_net_reward=" << s.var_net_reward
              << "\nmean_time_to_root=" << s.mean_time_to_root
              << " unreached=" << s.unreached << "\nmean_rho=" << s.mean_rho
              << " (over " << s.rho_episodes << " episodes with attack cost)"
              << "\nwall_clock_sec=" << s.wall_clock_sec << "\n";
    return 0;
  }

  if (sweep->parsed()) {
    std::vector<hagemu::SweepRow> rows = hagemu::cmd_sweep(config, deltas);
    std::cout << "delta actions mean_adp mean_ac mean_greedy var_adp var_ac var_greedy\n";
    for (const hagemu::SweepRow& row : rows)
      std::cout << row.delta << ' ' << row.num_actions << ' ' << row.mean_adp << ' '
                << row.mean_ac << ' ' << row.mean_greedy << ' ' << row.var_adp << ' '
                << row.var_ac << ' ' << row.var_greedy << '\n';
    std::cout << "wrote " << config.out_dir << "/sweep.csv\n";
    return 0;
  }

  if (greedy->parsed()) {
    hagemu::Workbench wb = hagemu::make_workbench(config);
    hagemu::PrunedSet pruned =
        hagemu::prune(wb.hag, wb.hag.initial_security(), config.ell);
    std::cout << "pruned set (ell=" << config.ell << "):";
    for (int e : pruned.actions) {
      const hagemu::ExploitEdge& edge = wb.hag.edges()[static_cast<std::size_t>(e)];
      std::cout << " e" << edge.from << "-" << edge.to;
    }
    std::cout << "\nQ(A,s0)=" << hagemu::set_value(wb.hag, pruned.actions) << "\n";
    if (certify) {
      hagemu::BoundCertificate cert = hagemu::cmd_greedy_certify(config);
      std::cout << "greedy_value=" << cert.greedy_value
                << " optimal_value=" << cert.optimal_value << " ratio=" << cert.ratio
                << " (bound 1-1/e=0.6321)\n";
    }
    return 0;
  }

  if (inspect->parsed()) {
    std::cout << hagemu::inspect_report(inspect_path);
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const hagemu::HagError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
