#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "snes/apinn.hpp"
#include "snes/bench.hpp"
#include "snes/model.hpp"
#include "snes/oracle.hpp"

namespace snes {

// Instance files: header "t,E,D,C,P", one integer row per period.
void write_instance_csv(const std::filesystem::path& path,
                        const std::vector<ExogenousState>& trajectory);
std::vector<ExogenousState> read_instance_csv(
    const std::filesystem::path& path);

// Decision traces: "t,prior,E,D,C,P,xb,xs,xr,profit".
void write_decision_trace_csv(const std::filesystem::path& path,
                              const std::vector<ExogenousState>& trajectory,
                              const std::vector<Decision>& decisions,
                              int initial_storage,
                              const BatteryParams& params);

// Policy tables: "t,prior,E,D,C,P,xb,xs,xr", sorted by key. Loading
// validates every row against the battery constraints and rejects the file
// on the first infeasible decision.
void save_policy_csv(const std::filesystem::path& path,
                     const PolicyTable& policy);
PolicyTable load_policy_csv(const std::filesystem::path& path,
                            const BatteryParams& params, int horizon);

void save_model_file(const std::filesystem::path& path,
                     const ValueModel& model);
ValueModel load_model_file(const std::filesystem::path& path);

// Benchmark outputs.
void write_instance_results_csv(const std::filesystem::path& path,
                                const std::vector<InstanceResult>& results);
void append_summary_csv(const std::filesystem::path& path,
                        const ClassSummary& summary);
std::vector<ClassSummary> read_summary_csv(const std::filesystem::path& path);

// Pivots summary rows into the two grouped (class x architecture) series:
// <prefix>_mean_pct.csv and <prefix>_prop_gt_80.csv.
void write_plotdata(const std::filesystem::path& summary_csv,
                    const std::filesystem::path& out_prefix);

// Per-round training diagnostics, appended.
void append_round_diagnostics_csv(const std::filesystem::path& path,
                                  const std::string& run_label,
                                  const RoundDiagnostics& row);

}  // namespace snes
