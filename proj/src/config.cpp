#include "snes/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "snes/bench.hpp"

namespace snes {

namespace {

using nlohmann::json;

template <typename T>
void read_key(const json& j, const char* key, T& out) {
  if (const auto it = j.find(key); it != j.end()) out = it->get<T>();
}

}  // namespace

BatteryParams RunConfig::battery_params() const {
  BatteryParams p = scenario == "low" ? BatteryParams::low_efficiency()
                                      : BatteryParams::high_efficiency();
  p.capacity = capacity;
  p.inject_rate = inject_rate;
  p.withdraw_rate = withdraw_rate;
  p.hold_cost = hold_cost;
  return p;
}

ApinnConfig RunConfig::apinn_config() const {
  ApinnConfig cfg;
  cfg.process = data_class(class_id).to_process_config(horizon);
  cfg.battery = battery_params();
  cfg.train.batch_size = batch_size;
  cfg.train.epochs = epochs;
  cfg.train.train_fraction = train_fraction;
  cfg.train.validation_fraction = validation_fraction;
  cfg.train.adam = {adam_step, adam_decay1, adam_decay2, adam_stabilizer};
  cfg.train.seed = seed;
  cfg.arch = architecture_from_string(architecture);
  cfg.trajectories = trajectories;
  cfg.rounds = rounds;
  cfg.levels.resize(levels);
  for (int i = 0; i < levels; ++i) cfg.levels[i] = i;
  cfg.improvement_samples = improvement_samples;
  cfg.eval_mode = eval_mode == "online" ? ApplyMode::online_greedy
                                        : ApplyMode::table;
  cfg.seed = seed;
  cfg.jobs = jobs;
  return cfg;
}

void RunConfig::validate() const {
  data_class(class_id);  // throws for unknown ids
  if (scenario != "high" && scenario != "low")
    throw std::invalid_argument("config: scenario must be 'high' or 'low'");
  architecture_from_string(architecture);
  if (horizon < 1)
    throw std::invalid_argument("config: horizon must be >= 1");
  if (levels < 1)
    throw std::invalid_argument("config: levels must be >= 1");
  if (eval_mode != "table" && eval_mode != "online")
    throw std::invalid_argument("config: eval_mode must be 'table' or 'online'");
  apinn_config().validate();
}

namespace {

void from_json_checked(const json& j, RunConfig& cfg) {
  if (!j.is_object())
    throw std::invalid_argument("config: top level must be a JSON object");
  static const char* known[] = {
      "class_id", "scenario", "architecture", "horizon", "trajectories",
      "rounds", "levels", "improvement_samples", "eval_mode", "seed", "jobs",
      "capacity",
      "inject_rate", "withdraw_rate", "hold_cost", "batch_size", "epochs",
      "train_fraction", "validation_fraction", "adam_step", "adam_decay1",
      "adam_decay2", "adam_stabilizer"};
  for (const auto& [key, value] : j.items()) {
    bool found = false;
    for (const char* k : known) found |= key == k;
    if (!found)
      throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  read_key(j, "class_id", cfg.class_id);
  read_key(j, "scenario", cfg.scenario);
  read_key(j, "architecture", cfg.architecture);
  read_key(j, "horizon", cfg.horizon);
  read_key(j, "trajectories", cfg.trajectories);
  read_key(j, "rounds", cfg.rounds);
  read_key(j, "levels", cfg.levels);
  read_key(j, "improvement_samples", cfg.improvement_samples);
  read_key(j, "eval_mode", cfg.eval_mode);
  read_key(j, "seed", cfg.seed);
  read_key(j, "jobs", cfg.jobs);
  read_key(j, "capacity", cfg.capacity);
  read_key(j, "inject_rate", cfg.inject_rate);
  read_key(j, "withdraw_rate", cfg.withdraw_rate);
  read_key(j, "hold_cost", cfg.hold_cost);
  read_key(j, "batch_size", cfg.batch_size);
  read_key(j, "epochs", cfg.epochs);
  read_key(j, "train_fraction", cfg.train_fraction);
  read_key(j, "validation_fraction", cfg.validation_fraction);
  read_key(j, "adam_step", cfg.adam_step);
  read_key(j, "adam_decay1", cfg.adam_decay1);
  read_key(j, "adam_decay2", cfg.adam_decay2);
  read_key(j, "adam_stabilizer", cfg.adam_stabilizer);
}

}  // namespace

RunConfig parse_config_json(const std::string& text) {
  RunConfig cfg;
  std::string trimmed = text;
  trimmed.erase(0, trimmed.find_first_not_of(" \t\r\n"));
  if (trimmed.empty()) {
    cfg.validate();
    return cfg;  // empty file: all defaults
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") +
                                e.what());
  }
  try {
    from_json_checked(j, cfg);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: bad value type: ") +
                                e.what());
  }
  cfg.validate();
  return cfg;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("config: cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_json(buffer.str());
}

std::string dump_config(const RunConfig& cfg) {
  json j;
  j["class_id"] = cfg.class_id;
  j["scenario"] = cfg.scenario;
  j["architecture"] = cfg.architecture;
  j["horizon"] = cfg.horizon;
  j["trajectories"] = cfg.trajectories;
  j["rounds"] = cfg.rounds;
  j["levels"] = cfg.levels;
  j["improvement_samples"] = cfg.improvement_samples;
  j["eval_mode"] = cfg.eval_mode;
  j["seed"] = cfg.seed;
  j["jobs"] = cfg.jobs;
  j["capacity"] = cfg.capacity;
  j["inject_rate"] = cfg.inject_rate;
  j["withdraw_rate"] = cfg.withdraw_rate;
  j["hold_cost"] = cfg.hold_cost;
  j["batch_size"] = cfg.batch_size;
  j["epochs"] = cfg.epochs;
  j["train_fraction"] = cfg.train_fraction;
  j["validation_fraction"] = cfg.validation_fraction;
  j["adam_step"] = cfg.adam_step;
  j["adam_decay1"] = cfg.adam_decay1;
  j["adam_decay2"] = cfg.adam_decay2;
  j["adam_stabilizer"] = cfg.adam_stabilizer;
  return j.dump(2);
}

}  // namespace snes
