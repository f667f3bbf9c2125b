#include "snes/apinn.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace snes {

Architecture architecture_from_string(const std::string& name) {
  if (name == "ols") return Architecture::ols;
  if (name == "svr") return Architecture::svr;
  if (name == "nn") return Architecture::nn;
  throw std::invalid_argument("unknown architecture '" + name +
                              "' (expected ols|svr|nn)");
}

const char* to_string(Architecture arch) {
  switch (arch) {
    case Architecture::ols: return "ols";
    case Architecture::svr: return "svr";
    case Architecture::nn: return "nn";
  }
  return "?";
}

std::uint64_t PolicyTable::key(int t, int prior_store,
                               const ExogenousState& w) {
  // All six components are small nonnegative integers (< 256).
  return (static_cast<std::uint64_t>(t) << 40) |
         (static_cast<std::uint64_t>(prior_store) << 32) |
         (static_cast<std::uint64_t>(w.energy) << 24) |
         (static_cast<std::uint64_t>(w.demand) << 16) |
         (static_cast<std::uint64_t>(w.buy_price) << 8) |
         static_cast<std::uint64_t>(w.sell_price);
}

std::optional<Decision> PolicyTable::find(int t, int prior_store,
                                          const ExogenousState& w) const {
  const auto it = entries.find(key(t, prior_store, w));
  if (it == entries.end()) return std::nullopt;
  return it->second;
}

ApinnConfig ApinnConfig::defaults() {
  ApinnConfig cfg;
  cfg.levels.resize(10);
  for (int i = 0; i < 10; ++i) cfg.levels[i] = i;
  return cfg;
}

void ApinnConfig::validate() const {
  process.validate();
  battery.validate();
  train.validate();
  if (trajectories <= 0 || rounds <= 0 || improvement_samples <= 0)
    throw std::invalid_argument(
        "ApinnConfig: trajectories/rounds/improvement_samples must be > 0");
  if (levels.empty())
    throw std::invalid_argument("ApinnConfig: at least one initial level");
  if (battery.capacity > 255 || process.horizon > 255)
    throw std::invalid_argument(
        "ApinnConfig: capacity and horizon must fit the 8-bit table key");
  for (const int level : levels)
    if (level < 0 || level > battery.capacity)
      throw std::invalid_argument(
          "ApinnConfig: initial levels must lie in [0, capacity]");
  if (jobs < 0)
    throw std::invalid_argument("ApinnConfig: jobs must be nonnegative");
}

namespace {

int resolve_jobs(int jobs) {
  return jobs > 0 ? jobs : omp_get_max_threads();
}

Decision policy_decision(const PolicyTable& policy, int t, int horizon,
                         int prior, const ExogenousState& w,
                         const BatteryParams& params, ApplyMode mode,
                         bool* fallback) {
  if (mode == ApplyMode::online_greedy && policy.model.has_value()) {
    *fallback = false;
    return best_decision(*policy.model, t, horizon, prior, w, params);
  }
  if (const auto hit = policy.find(t, prior, w)) {
    const StageState state{t, prior, w};
    if (violates_flow_constraints(*hit, state, params))
      throw std::runtime_error(
          "policy table holds an infeasible decision at key (t=" +
          std::to_string(t) + ", prior=" + std::to_string(prior) +
          ", E=" + std::to_string(w.energy) + ", D=" +
          std::to_string(w.demand) + ", C=" + std::to_string(w.buy_price) +
          ", P=" + std::to_string(w.sell_price) + ")");
    *fallback = false;
    return *hit;
  }
  *fallback = true;
  return naive_policy({t, prior, w}, params, horizon);
}

struct RolloutResult {
  double revenue = 0.0;
  long fallbacks = 0;
};

// Simulates one trajectory from one initial level and writes its horizon
// rows into [out, out + horizon).
RolloutResult rollout_into(const PolicyTable& policy, const ApinnConfig& cfg,
                           int round, int level, std::uint64_t item,
                           EvalRow* out) {
  RngStream rng = derive_stream(cfg.seed, "apinn-eval",
                                static_cast<std::uint64_t>(round), item);
  const SampledTrajectory traj = sample_trajectory(cfg.process, rng);
  const int horizon = cfg.process.horizon;

  RolloutResult result;
  int prior = level;
  std::vector<double> profits(horizon);
  for (int t = 1; t <= horizon; ++t) {
    const ExogenousState& w = traj.steps[t - 1];
    bool fallback = false;
    const Decision d = policy_decision(policy, t, horizon, prior, w,
                                       cfg.battery, cfg.eval_mode, &fallback);
    result.fallbacks += fallback;
    profits[t - 1] = stage_profit(d, prior, w, cfg.battery);
    out[t - 1] = EvalRow{t, prior, d.buy, d.sell, d.store, 0.0};
    prior = d.store;
  }
  double tail = 0.0;
  for (int t = horizon; t >= 1; --t) {
    out[t - 1].value_to_go = tail;
    tail += profits[t - 1];
  }
  result.revenue = tail;
  return result;
}

EvaluationDataset evaluate_policy_impl(const PolicyTable& policy,
                                       const ApinnConfig& cfg, int round,
                                       bool parallel) {
  cfg.validate();
  const int horizon = cfg.process.horizon;
  const long n_items =
      static_cast<long>(cfg.levels.size()) * cfg.trajectories;

  EvaluationDataset ds;
  ds.rows.resize(static_cast<std::size_t>(n_items) * horizon);

  // Per-item results are folded sequentially afterwards so the parallel
  // kernel is bit-identical to the serial one (summation order matters).
  std::vector<RolloutResult> per_item(n_items);
  std::string error;  // exceptions must not escape the OpenMP region

  if (parallel) {
#pragma omp parallel for schedule(static) num_threads(resolve_jobs(cfg.jobs))
    for (long item = 0; item < n_items; ++item) {
      try {
        const int level = cfg.levels[item / cfg.trajectories];
        per_item[item] = rollout_into(policy, cfg, round, level,
                                      static_cast<std::uint64_t>(item),
                                      ds.rows.data() + item * horizon);
      } catch (const std::exception& e) {
#pragma omp critical
        if (error.empty()) error = e.what();
      }
    }
  } else {
    for (long item = 0; item < n_items; ++item) {
      const int level = cfg.levels[item / cfg.trajectories];
      per_item[item] = rollout_into(policy, cfg, round, level,
                                    static_cast<std::uint64_t>(item),
                                    ds.rows.data() + item * horizon);
    }
  }
  if (!error.empty()) throw std::runtime_error(error);

  double revenue_total = 0.0;
  for (const RolloutResult& r : per_item) {
    revenue_total += r.revenue;
    ds.fallbacks += r.fallbacks;
  }
  ds.mean_revenue = revenue_total / static_cast<double>(n_items);
  return ds;
}

}  // namespace

EvaluationDataset evaluate_policy(const PolicyTable& policy,
                                  const ApinnConfig& cfg, int round) {
  return evaluate_policy_impl(policy, cfg, round, true);
}

EvaluationDataset evaluate_policy_serial(const PolicyTable& policy,
                                         const ApinnConfig& cfg, int round) {
  return evaluate_policy_impl(policy, cfg, round, false);
}

ValueModel fit_value_function(const EvaluationDataset& dataset,
                              Architecture arch, const ApinnConfig& cfg,
                              int round, FitReport* report) {
  if (dataset.rows.empty())
    throw std::invalid_argument("fit_value_function: empty dataset");
  std::vector<TrainingSample> samples;
  samples.reserve(dataset.rows.size());
  for (const EvalRow& row : dataset.rows)
    samples.push_back({row.features(), row.value_to_go});

  auto mse_on = [&](const auto& model) {
    double acc = 0.0;
    for (const TrainingSample& s : samples) {
      const double d = predict(model, s.x) - s.y;
      acc += d * d;
    }
    return acc / static_cast<double>(samples.size());
  };

  switch (arch) {
    case Architecture::ols: {
      const LinearModel model = fit_ols(samples);
      if (report != nullptr) *report = {mse_on(model), 0.0};
      return model;
    }
    case Architecture::svr: {
      const SvrModel model = fit_linear_svr(samples);
      if (report != nullptr) *report = {mse_on(model), 0.0};
      return model;
    }
    case Architecture::nn: {
      TrainConfig train = cfg.train;
      train.seed = mix_seed(cfg.seed, "fit", static_cast<std::uint64_t>(round));
      NnTrainReport nn_report;
      const NnModel model = nn_train(samples, train, &nn_report);
      if (report != nullptr)
        *report = {nn_report.final_train_msle, nn_report.best_val_msle};
      return model;
    }
  }
  throw std::logic_error("fit_value_function: unreachable");
}

Decision best_decision(const ValueModel& model, int t, int horizon,
                       int prior_store, const ExogenousState& w,
                       const BatteryParams& params) {
  const StorageRange range =
      feasible_storage_range(prior_store, params, t == horizon);
  const bool terminal = t == horizon;  // empty tail: value-to-go is 0
  double best = -std::numeric_limits<double>::infinity();
  Decision chosen;
  for (int next = range.lo; next <= range.hi; ++next) {
    const Decision d =
        derive_decision(w.energy, w.demand, next, prior_store, t, horizon,
                        params);
    double score = stage_profit(d, prior_store, w, params);
    if (!terminal)
      score += predict(model, {static_cast<double>(t),
                               static_cast<double>(prior_store),
                               static_cast<double>(d.buy),
                               static_cast<double>(d.sell),
                               static_cast<double>(d.store)});
    if (score > best) {  // strict: ties keep the smallest storage level
      best = score;
      chosen = d;
    }
  }
  return chosen;
}

namespace {

struct ImproveItem {
  std::uint64_t key = 0;
  Decision decision;
};

PolicyTable improve_policy_impl(const ValueModel& model,
                                const ApinnConfig& cfg, int round,
                                bool parallel) {
  cfg.validate();
  const int horizon = cfg.process.horizon;
  // Every reachable prior storage level gets improved, not just the levels
  // rollouts start from; rollouts wander across the whole range.
  const long n_priors = cfg.battery.capacity + 1;
  const long n_items = horizon * n_priors * cfg.improvement_samples;

  std::vector<ImproveItem> items(n_items);

  // One item: draw a fresh exogenous state for period t, solve the argmax
  // at (t, prior, W_t).
  auto run_item = [&](long idx) {
    const long per_t = n_priors * cfg.improvement_samples;
    const int t = static_cast<int>(idx / per_t) + 1;
    const long rem = idx % per_t;
    const int prior = static_cast<int>(rem / cfg.improvement_samples);
    RngStream rng = derive_stream(cfg.seed, "apinn-improve",
                                  static_cast<std::uint64_t>(round),
                                  static_cast<std::uint64_t>(idx));
    const SampledTrajectory traj = sample_trajectory(cfg.process, rng);
    const ExogenousState& w = traj.steps[t - 1];
    items[idx].key = PolicyTable::key(t, prior, w);
    items[idx].decision =
        best_decision(model, t, horizon, prior, w, cfg.battery);
  };

  if (parallel) {
    // terminal-period items skip the model entirely, so chunks vary in cost
#pragma omp parallel for schedule(dynamic, 256) \
    num_threads(resolve_jobs(cfg.jobs))
    for (long idx = 0; idx < n_items; ++idx) run_item(idx);
  } else {
    for (long idx = 0; idx < n_items; ++idx) run_item(idx);
  }

  PolicyTable table;
  table.generation = round;
  table.model = model;
  table.entries.reserve(items.size());
  // Sequential merge in item order keeps the table independent of the
  // thread count (duplicate keys carry identical decisions anyway).
  for (const ImproveItem& item : items) table.entries[item.key] = item.decision;
  return table;
}

}  // namespace

PolicyTable improve_policy(const ValueModel& model, const ApinnConfig& cfg,
                           int round) {
  return improve_policy_impl(model, cfg, round, true);
}

PolicyTable improve_policy_serial(const ValueModel& model,
                                  const ApinnConfig& cfg, int round) {
  return improve_policy_impl(model, cfg, round, false);
}

ApinnResult run_apinn(const ApinnConfig& cfg) {
  cfg.validate();
  ApinnResult result;
  result.policy.generation = 0;  // naive start: empty table, full fallback

  for (int round = 1; round <= cfg.rounds; ++round) {
    const EvaluationDataset ds = evaluate_policy(result.policy, cfg, round);
    FitReport fit;
    const ValueModel model =
        fit_value_function(ds, cfg.arch, cfg, round, &fit);
    result.diagnostics.push_back({round - 1, ds.rows.size(), fit.train_loss,
                                  fit.val_loss, ds.mean_revenue,
                                  ds.fallbacks});
    result.policy = improve_policy(model, cfg, round);
  }

  // Trailing evaluation so the final policy's simulated revenue is logged.
  const EvaluationDataset last =
      evaluate_policy(result.policy, cfg, cfg.rounds + 1);
  result.diagnostics.push_back({cfg.rounds, last.rows.size(), 0.0, 0.0,
                                last.mean_revenue, last.fallbacks});
  return result;
}

ApplyResult apply_policy(const PolicyTable& policy,
                         const std::vector<ExogenousState>& trajectory,
                         int initial_storage, const BatteryParams& params,
                         ApplyMode mode) {
  if (trajectory.empty())
    throw std::invalid_argument("apply_policy: empty trajectory");
  if (mode == ApplyMode::online_greedy && !policy.model.has_value())
    throw std::invalid_argument(
        "apply_policy: online_greedy needs a policy with a value model");
  const int horizon = static_cast<int>(trajectory.size());

  ApplyResult result;
  result.decisions.reserve(horizon);
  int prior = initial_storage;
  for (int t = 1; t <= horizon; ++t) {
    const ExogenousState& w = trajectory[t - 1];
    bool fallback = false;
    const Decision d =
        policy_decision(policy, t, horizon, prior, w, params, mode, &fallback);
    result.fallbacks += fallback;
    result.revenue += stage_profit(d, prior, w, params);
    result.decisions.push_back(d);
    prior = d.store;
  }
  return result;
}

}  // namespace snes
