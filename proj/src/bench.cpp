#include "snes/bench.hpp"

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "snes/io.hpp"

namespace snes {

ProcessConfig DataClassSpec::to_process_config(int horizon) const {
  ProcessConfig cfg = ProcessConfig::defaults();
  cfg.energy_noise = energy_noise;
  cfg.price_noise = DiscretizedGaussian::over_range(price_sigma, 8);
  cfg.price_kind = price_jumps
                       ? PriceProcessKind::with_jumps(
                             0.031, DiscretizedGaussian::over_range(50.0, 40))
                       : PriceProcessKind::markov_chain();
  cfg.horizon = horizon;
  return cfg;
}

const std::vector<DataClassSpec>& data_classes() {
  static const std::vector<DataClassSpec> classes = [] {
    const auto uniform = EnergyNoise::uniform_unit();
    auto pn = [](double sigma) { return EnergyNoise::pseudonormal(sigma, 5); };
    return std::vector<DataClassSpec>{
        {"S1", uniform, 0.5, true},  {"S2", uniform, 1.0, true},
        {"S3", uniform, 2.5, true},  {"S4", uniform, 5.0, true},
        {"S5", pn(0.5), 5.0, true},  {"S6", pn(1.0), 5.0, true},
        {"S7", pn(1.5), 5.0, true},  {"S8", pn(2.0), 5.0, true},
        {"S9", pn(0.5), 1.0, true},  {"S10", pn(1.0), 1.0, true},
        {"S11", pn(1.5), 1.0, true}, {"S12", pn(0.5), 1.0, false},
        {"S13", pn(1.0), 1.0, false},
    };
  }();
  return classes;
}

const DataClassSpec& data_class(const std::string& id) {
  for (const DataClassSpec& spec : data_classes())
    if (spec.id == id) return spec;
  throw std::invalid_argument("unknown data class '" + id +
                              "' (expected S1..S13)");
}

std::vector<std::vector<ExogenousState>> sample_instances(
    const DataClassSpec& spec, int count, std::uint64_t seed, int horizon) {
  if (count < 1)
    throw std::invalid_argument("sample_instances: count must be >= 1");
  const ProcessConfig cfg = spec.to_process_config(horizon);
  std::vector<std::vector<ExogenousState>> instances;
  instances.reserve(count);
  for (int i = 0; i < count; ++i) {
    RngStream rng = derive_stream(seed, "bench-instance",
                                  static_cast<std::uint64_t>(i));
    instances.push_back(sample_trajectory(cfg, rng).steps);
  }
  return instances;
}

std::vector<std::filesystem::path> generate_instances(
    const DataClassSpec& spec, int count, std::uint64_t seed,
    const std::filesystem::path& out_dir, int horizon) {
  std::filesystem::create_directories(out_dir);
  const auto instances = sample_instances(spec, count, seed, horizon);
  std::vector<std::filesystem::path> paths;
  paths.reserve(instances.size());
  char name[64];
  for (std::size_t i = 0; i < instances.size(); ++i) {
    std::snprintf(name, sizeof name, "%s_%05zu.csv", spec.id.c_str(), i);
    paths.push_back(out_dir / name);
    write_instance_csv(paths.back(), instances[i]);
  }
  return paths;
}

namespace {

InstanceResult score_instance(const PolicyTable& policy,
                              const std::vector<ExogenousState>& trajectory,
                              const BatteryParams& params, ApplyMode mode,
                              int initial_storage, int id) {
  InstanceResult res;
  res.instance_id = id;
  const DeterministicInstance inst{trajectory, params, initial_storage};
  res.oracle_revenue = solve_deterministic(inst).revenue;
  res.policy_revenue =
      apply_policy(policy, trajectory, initial_storage, params, mode).revenue;
  res.included = res.oracle_revenue > 0.0;
  if (res.included) {
    res.pct_optimal = 100.0 * res.policy_revenue / res.oracle_revenue;
    if (res.pct_optimal > 100.0 + 1e-6)
      throw std::logic_error(
          "hindsight bound violated on instance " + std::to_string(id) +
          ": policy " + std::to_string(res.policy_revenue) + " vs oracle " +
          std::to_string(res.oracle_revenue));
  }
  return res;
}

}  // namespace

std::vector<InstanceResult> evaluate_policy_on_class(
    const PolicyTable& policy,
    const std::vector<std::vector<ExogenousState>>& instances,
    const BatteryParams& params, ApplyMode mode, int initial_storage,
    int jobs) {
  if (instances.empty())
    throw std::invalid_argument("evaluate_policy_on_class: no instances");
  const long n = static_cast<long>(instances.size());
  std::vector<InstanceResult> results(n);
  std::string error;
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (long i = 0; i < n; ++i) {
    try {
      results[i] = score_instance(policy, instances[i], params, mode,
                                  initial_storage, static_cast<int>(i));
    } catch (const std::exception& e) {
#pragma omp critical
      if (error.empty()) error = e.what();
    }
  }
  if (!error.empty()) throw std::runtime_error(error);
  return results;
}

std::vector<InstanceResult> evaluate_policy_on_class_serial(
    const PolicyTable& policy,
    const std::vector<std::vector<ExogenousState>>& instances,
    const BatteryParams& params, ApplyMode mode, int initial_storage) {
  if (instances.empty())
    throw std::invalid_argument("evaluate_policy_on_class: no instances");
  std::vector<InstanceResult> results;
  results.reserve(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i)
    results.push_back(score_instance(policy, instances[i], params, mode,
                                     initial_storage, static_cast<int>(i)));
  return results;
}

ClassSummary summarize(const std::vector<InstanceResult>& results,
                       double threshold) {
  if (results.empty())
    throw std::invalid_argument("summarize: no results");
  ClassSummary summary;
  double pct_sum = 0.0;
  int above = 0;
  for (const InstanceResult& r : results) {
    if (!r.included) {
      ++summary.n_excluded;
      continue;
    }
    ++summary.n_included;
    pct_sum += r.pct_optimal;
    above += r.pct_optimal > threshold;
  }
  if (summary.n_included > 0) {
    summary.mean_pct_optimal = pct_sum / summary.n_included;
    summary.prop_above_threshold =
        static_cast<double>(above) / summary.n_included;
  }
  return summary;
}

}  // namespace snes
