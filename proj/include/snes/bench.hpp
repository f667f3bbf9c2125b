#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "snes/apinn.hpp"
#include "snes/oracle.hpp"

namespace snes {

// One row of the benchmark class table: how the exogenous processes are
// parameterized for that class.
struct DataClassSpec {
  std::string id;  // "S1".."S13"
  EnergyNoise energy_noise;
  double price_sigma = 1.0;
  bool price_jumps = true;

  ProcessConfig to_process_config(int horizon = 10) const;
};

// The thirteen benchmark classes.
const std::vector<DataClassSpec>& data_classes();
const DataClassSpec& data_class(const std::string& id);

// Draws `count` exogenous trajectories for a class, one derived stream per
// instance, so any subset regenerates identically.
std::vector<std::vector<ExogenousState>> sample_instances(
    const DataClassSpec& spec, int count, std::uint64_t seed,
    int horizon = 10);

// Same instances written as CSV files <class>_<index>.csv under out_dir.
std::vector<std::filesystem::path> generate_instances(
    const DataClassSpec& spec, int count, std::uint64_t seed,
    const std::filesystem::path& out_dir, int horizon = 10);

struct InstanceResult {
  int instance_id = 0;
  double policy_revenue = 0.0;
  double oracle_revenue = 0.0;
  double pct_optimal = 0.0;  // meaningful only when included
  bool included = false;     // excluded when the oracle revenue is <= 0
};

// Scores a policy instance-by-instance against the hindsight optimum.
// Enforces the hindsight bound (pct <= 100 + 1e-6) and throws on a breach,
// since that would mean the oracle is not an upper bound. Instances whose
// oracle revenue is nonpositive are marked excluded, not dropped.
std::vector<InstanceResult> evaluate_policy_on_class(
    const PolicyTable& policy,
    const std::vector<std::vector<ExogenousState>>& instances,
    const BatteryParams& params, ApplyMode mode, int initial_storage = 0,
    int jobs = 0);
std::vector<InstanceResult> evaluate_policy_on_class_serial(
    const PolicyTable& policy,
    const std::vector<std::vector<ExogenousState>>& instances,
    const BatteryParams& params, ApplyMode mode, int initial_storage = 0);

struct ClassSummary {
  std::string class_id;
  std::string scenario;
  std::string arch;
  int n_included = 0;
  int n_excluded = 0;
  double mean_pct_optimal = 0.0;
  double prop_above_threshold = 0.0;
};

ClassSummary summarize(const std::vector<InstanceResult>& results,
                       double threshold = 80.0);

}  // namespace snes
