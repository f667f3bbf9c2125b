#include <doctest.h>

#include "snes/apinn.hpp"
#include "snes/bench.hpp"

// The OpenMP kernels must be bit-identical to their serial references:
// every work item draws from its own derived stream, so scheduling cannot
// change any result.

using namespace snes;

namespace {

ApinnConfig parallel_config(int jobs) {
  ApinnConfig cfg = ApinnConfig::defaults();
  cfg.trajectories = 60;
  cfg.levels = {0, 2, 5, 9};
  cfg.improvement_samples = 40;
  cfg.arch = Architecture::ols;
  cfg.seed = 31415;
  cfg.jobs = jobs;
  return cfg;
}

}  // namespace

TEST_SUITE_BEGIN("parallel");

TEST_CASE("evaluate_policy: OpenMP output equals the serial reference") {
  for (const int jobs : {0, 2, 3}) {
    const ApinnConfig cfg = parallel_config(jobs);
    const EvaluationDataset serial =
        evaluate_policy_serial(PolicyTable{}, cfg, 1);
    const EvaluationDataset parallel = evaluate_policy(PolicyTable{}, cfg, 1);
    CHECK(serial.rows == parallel.rows);
    CHECK(serial.mean_revenue == parallel.mean_revenue);
    CHECK(serial.fallbacks == parallel.fallbacks);
  }
}

TEST_CASE("improve_policy: OpenMP table equals the serial reference") {
  const ApinnConfig cfg = parallel_config(2);
  const EvaluationDataset ds = evaluate_policy_serial(PolicyTable{}, cfg, 1);
  const ValueModel model = fit_value_function(ds, cfg.arch, cfg, 1);

  const PolicyTable serial = improve_policy_serial(model, cfg, 1);
  const PolicyTable parallel = improve_policy(model, cfg, 1);
  CHECK(serial.entries == parallel.entries);
  CHECK(serial.generation == parallel.generation);
}

TEST_CASE("evaluate_policy_on_class: OpenMP results equal the serial ones") {
  const BatteryParams params = BatteryParams::low_efficiency();
  const auto instances = sample_instances(data_class("S3"), 40, 8);

  PolicyTable greedy;
  LinearModel lean{};
  lean.beta[5] = 0.75;
  greedy.model = ValueModel{lean};

  const auto serial = evaluate_policy_on_class_serial(
      greedy, instances, params, ApplyMode::online_greedy, 0);
  const auto parallel = evaluate_policy_on_class(
      greedy, instances, params, ApplyMode::online_greedy, 0, 2);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].policy_revenue == parallel[i].policy_revenue);
    CHECK(serial[i].oracle_revenue == parallel[i].oracle_revenue);
    CHECK(serial[i].included == parallel[i].included);
  }
}

TEST_CASE("jobs=1 uses the parallel code path with one thread") {
  ApinnConfig cfg = parallel_config(1);
  const EvaluationDataset a = evaluate_policy(PolicyTable{}, cfg, 3);
  cfg.jobs = 2;
  const EvaluationDataset b = evaluate_policy(PolicyTable{}, cfg, 3);
  CHECK(a.rows == b.rows);
}

TEST_SUITE_END();
