#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "treeirl/irl_loop.hpp"
#include "treeirl/metrics.hpp"
#include "treeirl/self_check.hpp"
#include "treeirl/sweep.hpp"

namespace {

using namespace treeirl;

struct Options {
  IrlConfig config;
  std::string method = "erb";
  std::uint64_t seed = 0;         // run: the run's seed
  std::uint64_t master_seed = 0;  // sweep: root of all per-run streams
  int seeds = 5;
  int jobs = 4;
  std::string out_dir;
  std::string preset;
  std::string config_file;
};

// Config-file values fill in every option the command line left untouched,
// so precedence is defaults < file < CLI.
void apply_config_file(CLI::App* cmd, const std::string& path) {
  for (const auto& [key, value] : parse_flat_config(path)) {
    CLI::Option* option = cmd->get_option_no_throw("--" + key);
    if (option == nullptr) {
      throw ConfigError("unknown config key: " + key);
    }
    if (option->count() > 0) continue;
    try {
      option->add_result(value);
      option->run_callback();
    } catch (const CLI::Error& e) {
      throw ConfigError("bad value for config key " + key + ": " + e.what());
    }
  }
}

void add_experiment_options(CLI::App* cmd, Options& opt) {
  cmd->add_option("--branching", opt.config.tree.branching,
                  "Tree branching factor b (>= 2)");
  cmd->add_option("--levels", opt.config.tree.levels,
                  "Tree node layers including root and leaves (>= 2)");
  cmd->add_flag("--shaky", opt.config.tree.shaky,
                "Shaky-hands variant: random-action slips plus a parent action");
  cmd->add_option("--p-random", opt.config.tree.p_random,
                  "Slip probability on shaky trees");
  cmd->add_option("--reward-magnitude", opt.config.tree.reward_magnitude,
                  "Ground-truth reward per leftmost action");
  cmd->add_option("--method", opt.method,
                  "baseline | erb | erb-eqb | bc");
  cmd->add_option("--expert-ratio", opt.config.expert_ratio,
                  "Expert share of inner-update batches");
  cmd->add_option("--eta-q", opt.config.learner.eta_q, "Critic step size");
  cmd->add_option("--eta-pi", opt.config.learner.eta_pi, "Policy step size");
  cmd->add_option("--eta-r", opt.config.eta_r, "Reward step size");
  cmd->add_option("--alpha", opt.config.learner.alpha, "Entropy weight");
  cmd->add_option("--alpha-eqb", opt.config.learner.alpha_eqb,
                  "Entropy weight inside expert-state bootstrap targets");
  cmd->add_option("--eqb-density", opt.config.learner.eqb_density,
                  "Density-aware expert-state targets (false: plain form)");
  cmd->add_option("--gamma", opt.config.learner.gamma, "Discount factor");
  cmd->add_option("--epochs", opt.config.epochs, "Outer reward iterations");
  cmd->add_option("--inner-steps", opt.config.inner_steps,
                  "Actor-critic steps per epoch");
  cmd->add_option("--sac-updates", opt.config.sac_updates_per_step,
                  "Batch updates per inner step");
  cmd->add_option("--batch-size", opt.config.batch_size, "Update batch size");
  cmd->add_option("--buffer-capacity", opt.config.buffer_capacity,
                  "Replay buffer capacity");
  cmd->add_option("--expert-demos", opt.config.expert_demos,
                  "Number of expert demonstrations");
  cmd->add_option("--eval-episodes", opt.config.eval_episodes,
                  "Episodes per stochastic evaluation");
  cmd->add_option("--policy-noise", opt.config.policy_init_noise,
                  "Scale of the deterministic init offset on fresh logits");
  cmd->add_option("--step-cap", opt.config.step_cap,
                  "Episode step cap (0 = MDP default)");
  cmd->add_option("--config", opt.config_file,
                  "Config file, one key = value per line; CLI flags win");
}

int cmd_run(Options& opt) {
  opt.config.method = parse_method(opt.method);
  opt.config.seed = opt.seed;
  opt.config.validate();

  const LearningCurve curve = run_irl(opt.config);
  const double expert = expert_return(opt.config);
  const CurvePoint& last = curve.points.back();

  std::cout << "config: " << config_label(opt.config) << "\n"
            << "expert return: " << expert << "\n"
            << "final deterministic return: " << last.det_return << "\n"
            << "final stochastic return:    " << last.sto_return << "\n";
  for (const double fraction : {0.5, 0.7, 0.9}) {
    const auto reached = iterations_to_fraction(curve, expert, fraction);
    std::cout << "iterations to " << fraction * 100 << "% of expert: ";
    if (reached) {
      std::cout << *reached << "\n";
    } else {
      std::cout << "not reached in " << opt.config.epochs << "\n";
    }
  }

  if (!opt.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(opt.out_dir, ec);
    if (ec) throw IoError("cannot create directory: " + opt.out_dir);
    SweepResult single;
    RunRecord record;
    record.config = opt.config;
    record.config_id = config_label(opt.config);
    record.curve = curve;
    single.runs.push_back(std::move(record));
    const std::string path = opt.out_dir + "/run.csv";
    emit_csv(single, path);
    std::cout << "wrote " << path << "\n";
  }
  return 0;
}

int cmd_sweep(Options& opt) {
  opt.config.method = parse_method(opt.method);
  std::vector<IrlConfig> grid;
  if (!opt.preset.empty()) {
    grid = preset_grid(opt.preset, opt.config);
  } else {
    grid.push_back(opt.config);
  }

  const SweepResult result = run_sweep(grid, opt.seeds, opt.jobs, opt.master_seed);

  if (opt.out_dir.empty()) opt.out_dir = "out";
  std::error_code ec;
  std::filesystem::create_directories(opt.out_dir, ec);
  if (ec) throw IoError("cannot create directory: " + opt.out_dir);
  emit_csv(result, opt.out_dir + "/curves.csv");
  emit_thresholds_csv(result, opt.out_dir + "/thresholds.csv");
  emit_svg(result, opt.out_dir + "/charts.svg");

  std::cout << result.runs.size() << " runs (" << grid.size() << " configs x "
            << opt.seeds << " seeds)\n";
  std::cout << "config_id fraction reached/seeds mean_iterations\n";
  for (const ThresholdRow& row : result.thresholds) {
    std::cout << row.config_id << " " << row.fraction << " "
              << row.reached_count << "/" << row.per_seed.size() << " "
              << row.mean_iterations << "\n";
  }
  std::cout << "wrote " << opt.out_dir << "/curves.csv, thresholds.csv, charts.svg\n";
  return 0;
}

int cmd_check() {
  const bool ok = report_checks(run_core_checks(), std::cout);
  std::cout << (ok ? "all checks passed\n" : "CHECKS FAILED\n");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tabular maximum-entropy IRL with expert bootstrapping on tree MDPs"};
  app.require_subcommand(1);

  Options run_opt;
  Options sweep_opt;
  sweep_opt.config.tree.branching = 10;
  sweep_opt.config.tree.levels = 7;
  run_opt.config.tree.branching = 10;
  run_opt.config.tree.levels = 7;

  CLI::App* run_cmd = app.add_subcommand("run", "Run a single configuration");
  add_experiment_options(run_cmd, run_opt);
  run_cmd->add_option("--seed", run_opt.seed, "Run seed");
  run_cmd->add_option("--out-dir", run_opt.out_dir,
                      "Directory for the per-iteration CSV (optional)");

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Run a preset or config-file sweep");
  add_experiment_options(sweep_cmd, sweep_opt);
  sweep_cmd->add_option("--preset", sweep_opt.preset,
                        "fig2 | shaky | ratios (omit to sweep the given flags)");
  sweep_cmd->add_option("--seeds", sweep_opt.seeds, "Seeds per config");
  sweep_cmd->add_option("--jobs", sweep_opt.jobs,
                        "Worker threads (does not affect results)");
  sweep_cmd->add_option("--master-seed", sweep_opt.master_seed,
                        "Root seed for all per-run streams");
  sweep_cmd->add_option("--out-dir", sweep_opt.out_dir,
                        "Output directory (default: out)");

  app.add_subcommand("check", "Run the oracle/property self-check suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand("run")) {
      if (!run_opt.config_file.empty()) {
        apply_config_file(run_cmd, run_opt.config_file);
      }
      return cmd_run(run_opt);
    }
    if (app.got_subcommand("sweep")) {
      if (!sweep_opt.config_file.empty()) {
        apply_config_file(sweep_cmd, sweep_opt.config_file);
      }
      return cmd_sweep(sweep_opt);
    }
    if (app.got_subcommand("check")) return cmd_check();
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
