#pragma once

#include <filesystem>
#include <string>

#include "snes/apinn.hpp"

namespace snes {

// Everything a run needs, resolvable from a JSON config file plus flag
// overrides. Defaults are the benchmark parameterization: capacity 30,
// rates 6/3, hold cost 0.0005, horizon 10, 3000 rollouts per level, 10
// improvement rounds, high-efficiency scenario.
struct RunConfig {
  std::string class_id = "S1";
  std::string scenario = "high";  // high: eta 0.05, low: eta 0.3
  std::string architecture = "nn";
  int horizon = 10;
  int trajectories = 3000;
  int rounds = 10;
  int levels = 10;  // initial battery levels 0..levels-1
  int improvement_samples = 200;
  std::string eval_mode = "table";  // training rollouts: table | online
  std::uint64_t seed = 1;
  int jobs = 0;

  int capacity = 30;
  int inject_rate = 6;
  int withdraw_rate = 3;
  double hold_cost = 0.0005;

  int batch_size = 100;
  int epochs = 15;
  double train_fraction = 0.7;
  double validation_fraction = 0.2;
  double adam_step = 0.001;
  double adam_decay1 = 0.9;
  double adam_decay2 = 0.999;
  double adam_stabilizer = 1e-7;

  BatteryParams battery_params() const;
  ApinnConfig apinn_config() const;

  // Throws std::invalid_argument with a precise message on any
  // out-of-range value.
  void validate() const;
};

// Reads a JSON object of RunConfig keys; unknown keys are rejected. An
// empty object (or empty file) yields the defaults.
RunConfig parse_config_file(const std::filesystem::path& path);
RunConfig parse_config_json(const std::string& text);

// Serializes back to JSON; parse(dump(c)) == c.
std::string dump_config(const RunConfig& cfg);

}  // namespace snes
