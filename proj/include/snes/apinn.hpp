#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "snes/model.hpp"
#include "snes/regress.hpp"
#include "snes/stochastic.hpp"

namespace snes {

enum class Architecture { ols, svr, nn };

Architecture architecture_from_string(const std::string& name);
const char* to_string(Architecture arch);

// Sampled-state policy: exact-match lookup on (t, prior storage, exogenous
// state), falling back to the naive policy elsewhere. Carries the value
// model that produced it so decisions can also be recomputed on the fly.
struct PolicyTable {
  std::unordered_map<std::uint64_t, Decision> entries;
  int generation = 0;
  std::optional<ValueModel> model;

  static std::uint64_t key(int t, int prior_store, const ExogenousState& w);
  std::optional<Decision> find(int t, int prior_store,
                               const ExogenousState& w) const;
};

// How a policy picks decisions at states: replay stored table entries with
// naive fallback, or rerun the argmax from the policy's value model at
// every visited state.
enum class ApplyMode { table, online_greedy };

struct ApinnConfig {
  ProcessConfig process = ProcessConfig::defaults();
  BatteryParams battery;
  TrainConfig train;
  Architecture arch = Architecture::nn;
  int trajectories = 3000;       // simulated rollouts per initial level
  int rounds = 10;               // policy-improvement iterations
  std::vector<int> levels;       // initial battery levels swept in rollouts
  int improvement_samples = 200; // exogenous draws per (t, prior level)
  // Decision source for the training-loop rollouts; online_greedy silently
  // behaves like table until a round has produced a value model.
  ApplyMode eval_mode = ApplyMode::table;
  std::uint64_t seed = 0;
  int jobs = 0;                  // 0 = all available cores

  static ApinnConfig defaults();
  void validate() const;
};

struct EvalRow {
  int t = 0;
  int prior_store = 0;
  int buy = 0;
  int sell = 0;
  int store = 0;
  double value_to_go = 0.0;  // realized profit over periods t+1..horizon

  bool operator==(const EvalRow&) const = default;
  FeatureVector features() const {
    return {static_cast<double>(t), static_cast<double>(prior_store),
            static_cast<double>(buy), static_cast<double>(sell),
            static_cast<double>(store)};
  }
};

struct EvaluationDataset {
  std::vector<EvalRow> rows;
  double mean_revenue = 0.0;  // mean total profit per simulated rollout
  long fallbacks = 0;         // periods served by the naive fallback
};

// Rolls the policy over fresh trajectories from every configured initial
// level and labels each visited (state, decision) with its realized
// value-to-go. Work items are independent (one derived random stream per
// rollout), so the OpenMP version is bit-identical to the serial reference.
EvaluationDataset evaluate_policy(const PolicyTable& policy,
                                  const ApinnConfig& cfg, int round);
EvaluationDataset evaluate_policy_serial(const PolicyTable& policy,
                                         const ApinnConfig& cfg, int round);

struct FitReport {
  double train_loss = 0.0;  // MSLE for nn, mean squared error otherwise
  double val_loss = 0.0;    // nn only; 0 elsewhere
};

// Trains the configured approximator on the dataset rows.
ValueModel fit_value_function(const EvaluationDataset& dataset,
                              Architecture arch, const ApinnConfig& cfg,
                              int round, FitReport* report = nullptr);

// Best feasible decision at one state under the model: argmax over
// reachable storage levels of stage profit plus predicted value-to-go,
// ties toward the smallest level. The terminal period's continuation is
// identically zero, so no prediction enters there.
Decision best_decision(const ValueModel& model, int t, int horizon,
                       int prior_store, const ExogenousState& w,
                       const BatteryParams& params);

// One policy-improvement sweep: for sampled exogenous states at every
// (period, prior storage level 0..capacity), stores the argmax decision.
// Same serial/OpenMP equivalence contract as evaluate_policy.
PolicyTable improve_policy(const ValueModel& model, const ApinnConfig& cfg,
                           int round);
PolicyTable improve_policy_serial(const ValueModel& model,
                                  const ApinnConfig& cfg, int round);

struct RoundDiagnostics {
  int round = 0;            // 0 rows describe the starting naive policy
  std::size_t dataset_rows = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double mean_revenue = 0.0;
  long fallbacks = 0;
};

struct ApinnResult {
  PolicyTable policy;
  std::vector<RoundDiagnostics> diagnostics;
};

// Full approximate policy iteration: evaluate, fit, improve, for the
// configured number of rounds starting from the naive policy, plus a final
// evaluation of the last policy for the diagnostics trail.
ApinnResult run_apinn(const ApinnConfig& cfg);

struct ApplyResult {
  double revenue = 0.0;
  std::vector<Decision> decisions;
  long fallbacks = 0;
};

// Causal rollout of a policy over a fixed trajectory. Table mode replays
// stored decisions with naive fallback; online_greedy recomputes the
// argmax from the policy's value model at every step (requires one).
ApplyResult apply_policy(const PolicyTable& policy,
                         const std::vector<ExogenousState>& trajectory,
                         int initial_storage, const BatteryParams& params,
                         ApplyMode mode);

}  // namespace snes
