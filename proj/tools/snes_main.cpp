#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "snes/bench.hpp"
#include "snes/config.hpp"
#include "snes/io.hpp"

namespace fs = std::filesystem;
using namespace snes;

namespace {

void add_battery_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--scenario", cfg.scenario,
                  "Efficiency scenario: high (eta=0.05) or low (eta=0.3)");
  cmd->add_option("--capacity", cfg.capacity, "Battery capacity");
  cmd->add_option("--inject-rate", cfg.inject_rate,
                  "Max storage increase per period");
  cmd->add_option("--withdraw-rate", cfg.withdraw_rate,
                  "Max storage decrease per period");
  cmd->add_option("--hold-cost", cfg.hold_cost,
                  "Storage rent per unit per period");
}

ApplyMode parse_mode(const std::string& mode) {
  if (mode == "table") return ApplyMode::table;
  if (mode == "online") return ApplyMode::online_greedy;
  throw std::invalid_argument("--mode must be 'table' or 'online'");
}

int run_gen(const RunConfig& cfg, int count, const std::string& out_dir,
            bool zero_noise) {
  DataClassSpec spec = data_class(cfg.class_id);
  if (zero_noise) {
    spec.energy_noise = EnergyNoise::pseudonormal(0.0, 5);
    spec.price_sigma = 0.0;
    spec.price_jumps = false;
  }
  auto process = spec.to_process_config(cfg.horizon);
  if (zero_noise) process.demand_noise = DiscretizedGaussian::over_range(0.0, 2);
  process.validate();

  // Write through the spec path so zero-noise also silences demand.
  fs::create_directories(out_dir);
  std::vector<fs::path> paths;
  char name[64];
  for (int i = 0; i < count; ++i) {
    RngStream rng = derive_stream(cfg.seed, "bench-instance",
                                  static_cast<std::uint64_t>(i));
    const auto traj = sample_trajectory(process, rng).steps;
    std::snprintf(name, sizeof name, "%s_%05d.csv", spec.id.c_str(), i);
    paths.emplace_back(fs::path(out_dir) / name);
    write_instance_csv(paths.back(), traj);
  }
  std::cout << "wrote " << paths.size() << " instance files to " << out_dir
            << "\n";
  return 0;
}

int run_train(const RunConfig& cfg, const std::string& out,
              const std::string& model_out, const std::string& log_path) {
  const ApinnConfig apinn = cfg.apinn_config();
  const long rollouts =
      static_cast<long>(apinn.trajectories) * apinn.levels.size();
  std::cout << "training " << cfg.architecture << " on " << cfg.class_id
            << " (" << cfg.scenario << "): " << apinn.rounds << " rounds, "
            << rollouts << " rollouts/round\n";
  if (apinn.trajectories >= 3000 && apinn.rounds >= 10)
    std::cout << "note: paper-scale settings; this can run for hours\n";

  const ApinnResult result = run_apinn(apinn);
  const std::string label =
      cfg.class_id + "-" + cfg.scenario + "-" + cfg.architecture;
  for (const RoundDiagnostics& d : result.diagnostics) {
    std::printf(
        "round %d: rows=%zu train_loss=%.6g val_loss=%.6g "
        "mean_revenue=%.6g fallbacks=%ld\n",
        d.round, d.dataset_rows, d.train_loss, d.val_loss, d.mean_revenue,
        d.fallbacks);
    if (!log_path.empty())
      append_round_diagnostics_csv(log_path, label, d);
  }

  save_policy_csv(out, result.policy);
  std::cout << "policy table (" << result.policy.entries.size()
            << " entries) -> " << out << "\n";
  if (result.policy.model.has_value()) {
    const std::string model_path = model_out.empty() ? out + ".model"
                                                     : model_out;
    save_model_file(model_path, *result.policy.model);
    std::cout << "value model -> " << model_path << "\n";
  }
  return 0;
}

int run_eval(const RunConfig& cfg, const std::string& policy_path,
             const std::string& model_path, const std::string& instances_dir,
             int count, const std::string& mode_name, int initial_storage,
             const std::string& out_prefix, bool naive, bool full) {
  const BatteryParams params = cfg.battery_params();
  const ApplyMode mode = parse_mode(mode_name);

  PolicyTable policy;
  if (!naive) {
    policy = load_policy_csv(policy_path, params, cfg.horizon);
    const std::string mp =
        model_path.empty() ? policy_path + ".model" : model_path;
    if (fs::exists(mp)) policy.model = load_model_file(mp);
  }
  if (mode == ApplyMode::online_greedy && !policy.model.has_value())
    throw std::invalid_argument(
        "online mode needs a value model (--model, or evaluate --mode table)");

  std::vector<std::vector<ExogenousState>> instances;
  if (!instances_dir.empty()) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(instances_dir))
      if (entry.path().extension() == ".csv") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& file : files) instances.push_back(read_instance_csv(file));
    if (instances.empty())
      throw std::runtime_error("no .csv instances under " + instances_dir);
  } else {
    if (full) {
      count = 2000;
      std::cout << "full scale: evaluating 2000 instances; this can take a "
                   "while\n";
    }
    instances = sample_instances(data_class(cfg.class_id), count, cfg.seed,
                                 cfg.horizon);
  }

  const auto results = evaluate_policy_on_class(policy, instances, params,
                                                mode, initial_storage,
                                                cfg.jobs);
  ClassSummary summary = summarize(results);
  summary.class_id = cfg.class_id;
  summary.scenario = cfg.scenario;
  summary.arch = naive ? "naive" : cfg.architecture;

  write_instance_results_csv(out_prefix + "_instances.csv", results);
  append_summary_csv(out_prefix + "_summary.csv", summary);
  std::printf(
      "%s %s %s: mean_pct_optimal=%.3f prop_gt_80=%.3f included=%d "
      "excluded=%d\n",
      summary.class_id.c_str(), summary.scenario.c_str(),
      summary.arch.c_str(), summary.mean_pct_optimal,
      summary.prop_above_threshold, summary.n_included, summary.n_excluded);
  return 0;
}

int run_oracle(const RunConfig& cfg, const std::string& instance_path,
               int initial_storage, std::string out) {
  DeterministicInstance inst;
  inst.trajectory = read_instance_csv(instance_path);
  inst.params = cfg.battery_params();
  inst.initial_storage = initial_storage;

  const OracleSolution sol = solve_deterministic(inst);
  const auto violations = check_ip_feasibility(sol, inst);
  if (!violations.empty())
    throw std::runtime_error("oracle solution failed self-check: " +
                             violations.front());

  if (out.empty()) out = instance_path + ".solution.csv";
  write_decision_trace_csv(out, inst.trajectory, sol.decisions,
                           inst.initial_storage, inst.params);
  std::printf("revenue=%.17g\n", sol.revenue);
  std::cout << "decision trace -> " << out << "\n";
  return 0;
}

// --config must be known before option defaults bind, so scan argv first.
RunConfig preload_config(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config")
      return parse_config_file(argv[i + 1]);
  return RunConfig{};
}

}  // namespace

int main(int argc, char** argv) {
  try {
    RunConfig cfg = preload_config(argc, argv);

    CLI::App app{
        "Battery-arbitrage policy training and benchmarking over seeded "
        "stochastic instances"};
    app.require_subcommand(0, 1);
    app.fallthrough();  // app-level flags may follow the subcommand
    std::string config_path;
    bool dump = false;
    app.add_option("--config", config_path,
                   "JSON config file (flags override file values)");
    app.add_flag("--dump-config", dump,
                 "Print the effective configuration and exit");
    app.add_option("--seed", cfg.seed, "Root seed for all derived streams");
    app.add_option("--jobs", cfg.jobs,
                   "Worker threads (0 = all available cores)");

    // gen
    auto* gen = app.add_subcommand("gen", "Generate benchmark instance files");
    int gen_count = 10;
    std::string gen_out = "instances";
    bool gen_zero_noise = false;
    gen->add_option("--class", cfg.class_id, "Data class S1..S13");
    gen->add_option("--count,-n", gen_count, "Number of instances");
    gen->add_option("--out", gen_out, "Output directory");
    gen->add_option("--horizon", cfg.horizon, "Periods per instance");
    gen->add_flag("--zero-noise", gen_zero_noise,
                  "Disable all noise (degenerate instances for debugging)");

    // train
    auto* train = app.add_subcommand(
        "train", "Run approximate policy iteration and save the policy");
    std::string train_out = "policy.csv";
    std::string train_model_out, train_log = "training_log.csv";
    bool train_full = false;
    train->add_option("--class", cfg.class_id, "Data class S1..S13");
    train->add_option("--arch", cfg.architecture,
                      "Value-model architecture: ols|svr|nn");
    train->add_option("--trajectories,-M", cfg.trajectories,
                      "Rollouts per initial level per round");
    train->add_option("--rounds,-N", cfg.rounds, "Improvement rounds");
    train->add_option("--horizon,-T", cfg.horizon, "Periods per rollout");
    train->add_option("--levels", cfg.levels,
                      "Initial battery levels swept (0..levels-1)");
    train->add_option("--improvement-samples", cfg.improvement_samples,
                      "Exogenous draws per (period, prior level) when "
                      "improving");
    train->add_option("--eval-mode", cfg.eval_mode,
                      "Training rollout decisions: table | online");
    train->add_option("--out", train_out, "Policy table output path");
    train->add_option("--model-out", train_model_out,
                      "Value model output path (default <out>.model)");
    train->add_option("--log", train_log,
                      "Per-round diagnostics CSV (appended)");
    train->add_flag("--full", train_full,
                    "Paper-scale training (M=3000, N=10); multi-hour runtime");
    add_battery_flags(train, cfg);
    train->add_option("--batch-size", cfg.batch_size, "NN batch size");
    train->add_option("--epochs", cfg.epochs, "NN training epochs");

    // eval
    auto* eval = app.add_subcommand(
        "eval", "Score a trained policy against the hindsight oracle");
    std::string eval_policy = "policy.csv";
    std::string eval_model, eval_instances_dir, eval_prefix = "eval";
    std::string eval_mode = "online";
    int eval_count = 200;
    int eval_initial = 0;
    bool eval_naive = false, eval_full = false;
    eval->add_option("--policy", eval_policy, "Policy table CSV");
    eval->add_option("--model", eval_model,
                     "Value model file (default <policy>.model)");
    eval->add_option("--class", cfg.class_id, "Data class S1..S13");
    eval->add_option("--count,-n", eval_count,
                     "Instances to evaluate (ignored with --instances-dir)");
    eval->add_option("--instances-dir", eval_instances_dir,
                     "Evaluate pre-generated instance files instead");
    eval->add_option("--mode", eval_mode,
                     "Decision source: online (argmax from the model) or "
                     "table (stored entries with naive fallback)");
    eval->add_option("--initial-storage", eval_initial,
                     "Battery level entering period 1");
    eval->add_option("--out-prefix", eval_prefix,
                     "Prefix for _instances.csv and _summary.csv outputs");
    eval->add_option("--arch", cfg.architecture,
                     "Architecture label for the summary row");
    eval->add_flag("--naive", eval_naive,
                   "Score the naive baseline instead of a trained policy");
    eval->add_flag("--full", eval_full, "Evaluate 2000 instances per class");
    eval->add_option("--horizon", cfg.horizon, "Periods per instance");
    add_battery_flags(eval, cfg);

    // oracle
    auto* oracle = app.add_subcommand(
        "oracle", "Solve one instance to hindsight optimality");
    std::string oracle_instance;
    std::string oracle_out;
    int oracle_initial = 0;
    oracle->add_option("--instance", oracle_instance, "Instance CSV")
        ->required();
    oracle->add_option("--initial-storage", oracle_initial,
                       "Battery level entering period 1");
    oracle->add_option("--out", oracle_out,
                       "Solution trace path (default <instance>.solution.csv)");
    add_battery_flags(oracle, cfg);

    // plotdata
    auto* plotdata = app.add_subcommand(
        "plotdata", "Pivot summary rows into figure-ready series");
    std::string plot_summary, plot_prefix = "figures";
    plotdata->add_option("--summary", plot_summary, "Summary CSV to pivot")
        ->required();
    plotdata->add_option("--out-prefix", plot_prefix,
                         "Prefix for the two series files");

    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      app.exit(e);
      return 1;  // flag misuse is a validation error
    }

    if (train_full) {
      cfg.trajectories = 3000;
      cfg.rounds = 10;
      std::cout << "full scale requested: M=3000, N=10 (multi-hour runtime "
                   "likely)\n";
    }

    cfg.validate();
    if (dump) {
      std::cout << dump_config(cfg) << "\n";
      return 0;
    }
    if (gen->parsed()) return run_gen(cfg, gen_count, gen_out, gen_zero_noise);
    if (train->parsed())
      return run_train(cfg, train_out, train_model_out, train_log);
    if (eval->parsed())
      return run_eval(cfg, eval_policy, eval_model, eval_instances_dir,
                      eval_count, eval_mode, eval_initial, eval_prefix,
                      eval_naive, eval_full);
    if (oracle->parsed())
      return run_oracle(cfg, oracle_instance, oracle_initial, oracle_out);
    if (plotdata->parsed()) {
      write_plotdata(plot_summary, plot_prefix);
      std::cout << "series -> " << plot_prefix << "_mean_pct.csv, "
                << plot_prefix << "_prop_gt_80.csv\n";
      return 0;
    }
    std::cout << app.help();
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
