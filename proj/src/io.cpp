#include "snes/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace snes {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path, bool append = false) {
  std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

int parse_int(const std::string& s, const std::string& context) {
  try {
    std::size_t pos = 0;
    const int value = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return value;
  } catch (const std::exception&) {
    throw std::runtime_error(context + ": expected an integer, got '" + s +
                             "'");
  }
}

double parse_double(const std::string& s, const std::string& context) {
  try {
    std::size_t pos = 0;
    const double value = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return value;
  } catch (const std::exception&) {
    throw std::runtime_error(context + ": expected a number, got '" + s + "'");
  }
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_instance_csv(const std::filesystem::path& path,
                        const std::vector<ExogenousState>& trajectory) {
  auto out = open_output(path);
  out << "t,E,D,C,P\n";
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    const ExogenousState& w = trajectory[i];
    out << (i + 1) << ',' << w.energy << ',' << w.demand << ','
        << w.buy_price << ',' << w.sell_price << '\n';
  }
}

std::vector<ExogenousState> read_instance_csv(
    const std::filesystem::path& path) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line) || split_csv(line) !=
      std::vector<std::string>{"t", "E", "D", "C", "P"})
    throw std::runtime_error(path.string() +
                             ": missing instance header 't,E,D,C,P'");
  std::vector<ExogenousState> trajectory;
  int expected_t = 1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 5)
      throw std::runtime_error(path.string() + ": expected 5 columns");
    const std::string ctx = path.string() + " row " + std::to_string(expected_t);
    if (parse_int(fields[0], ctx) != expected_t)
      throw std::runtime_error(ctx + ": periods must run 1..T in order");
    ExogenousState w;
    w.energy = parse_int(fields[1], ctx);
    w.demand = parse_int(fields[2], ctx);
    w.buy_price = parse_int(fields[3], ctx);
    w.sell_price = parse_int(fields[4], ctx);
    if (w.energy < 0 || w.demand < 0 || w.buy_price < 0 || w.sell_price < 0)
      throw std::runtime_error(ctx + ": negative value");
    if (w.sell_price > w.buy_price)
      throw std::runtime_error(ctx + ": selling price exceeds buying price");
    trajectory.push_back(w);
    ++expected_t;
  }
  if (trajectory.empty())
    throw std::runtime_error(path.string() + ": no data rows");
  return trajectory;
}

void write_decision_trace_csv(const std::filesystem::path& path,
                              const std::vector<ExogenousState>& trajectory,
                              const std::vector<Decision>& decisions,
                              int initial_storage,
                              const BatteryParams& params) {
  if (trajectory.size() != decisions.size())
    throw std::invalid_argument(
        "write_decision_trace_csv: trajectory/decision length mismatch");
  auto out = open_output(path);
  out << "t,prior,E,D,C,P,xb,xs,xr,profit\n";
  int prior = initial_storage;
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    const ExogenousState& w = trajectory[i];
    const Decision& d = decisions[i];
    out << (i + 1) << ',' << prior << ',' << w.energy << ',' << w.demand
        << ',' << w.buy_price << ',' << w.sell_price << ',' << d.buy << ','
        << d.sell << ',' << d.store << ','
        << fmt_double(stage_profit(d, prior, w, params)) << '\n';
    prior = d.store;
  }
}

void save_policy_csv(const std::filesystem::path& path,
                     const PolicyTable& policy) {
  std::vector<std::pair<std::uint64_t, Decision>> rows(
      policy.entries.begin(), policy.entries.end());
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  auto out = open_output(path);
  out << "t,prior,E,D,C,P,xb,xs,xr\n";
  for (const auto& [key, d] : rows) {
    out << ((key >> 40) & 0xff) << ',' << ((key >> 32) & 0xff) << ','
        << ((key >> 24) & 0xff) << ',' << ((key >> 16) & 0xff) << ','
        << ((key >> 8) & 0xff) << ',' << (key & 0xff) << ',' << d.buy << ','
        << d.sell << ',' << d.store << '\n';
  }
}

PolicyTable load_policy_csv(const std::filesystem::path& path,
                            const BatteryParams& params, int horizon) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line) ||
      split_csv(line) != std::vector<std::string>{"t", "prior", "E", "D", "C",
                                                  "P", "xb", "xs", "xr"})
    throw std::runtime_error(path.string() + ": missing policy header");
  PolicyTable policy;
  int row_no = 1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 9)
      throw std::runtime_error(path.string() + ": expected 9 columns");
    const std::string ctx = path.string() + " row " + std::to_string(row_no++);
    const int t = parse_int(fields[0], ctx);
    const int prior = parse_int(fields[1], ctx);
    ExogenousState w;
    w.energy = parse_int(fields[2], ctx);
    w.demand = parse_int(fields[3], ctx);
    w.buy_price = parse_int(fields[4], ctx);
    w.sell_price = parse_int(fields[5], ctx);
    Decision d;
    d.buy = parse_int(fields[6], ctx);
    d.sell = parse_int(fields[7], ctx);
    d.store = parse_int(fields[8], ctx);
    if (t < 1 || t > horizon)
      throw std::runtime_error(ctx + ": period outside [1, horizon]");
    if (prior < 0 || prior > params.capacity)
      throw std::runtime_error(ctx + ": prior storage outside [0, capacity]");
    if (w.energy < 0 || w.demand < 0 || w.sell_price < 0 ||
        std::max({w.energy, w.demand, w.buy_price, w.sell_price, t, prior}) >
            255)
      throw std::runtime_error(ctx + ": state value outside the key range");
    const StageState state{t, prior, w};
    const auto violations = validate_decision(d, state, params);
    if (!violations.empty())
      throw std::runtime_error(ctx + ": infeasible decision (" +
                               violations.front() + ")");
    policy.entries[PolicyTable::key(t, prior, w)] = d;
  }
  return policy;
}

void save_model_file(const std::filesystem::path& path,
                     const ValueModel& model) {
  auto out = open_output(path);
  save_model(out, model);
}

ValueModel load_model_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return load_model(in);
}

void write_instance_results_csv(const std::filesystem::path& path,
                                const std::vector<InstanceResult>& results) {
  auto out = open_output(path);
  out << "instance,policy_revenue,oracle_revenue,pct_optimal,included\n";
  for (const InstanceResult& r : results) {
    out << r.instance_id << ',' << fmt_double(r.policy_revenue) << ','
        << fmt_double(r.oracle_revenue) << ','
        << (r.included ? fmt_double(r.pct_optimal) : std::string("nan")) << ','
        << (r.included ? 1 : 0) << '\n';
  }
}

namespace {
constexpr const char* kSummaryHeader =
    "class,scenario,arch,n_included,n_excluded,mean_pct_optimal,prop_gt_80";
}

void append_summary_csv(const std::filesystem::path& path,
                        const ClassSummary& summary) {
  const bool fresh =
      !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  auto out = open_output(path, /*append=*/true);
  if (fresh) out << kSummaryHeader << '\n';
  out << summary.class_id << ',' << summary.scenario << ',' << summary.arch
      << ',' << summary.n_included << ',' << summary.n_excluded << ','
      << fmt_double(summary.mean_pct_optimal) << ','
      << fmt_double(summary.prop_above_threshold) << '\n';
}

std::vector<ClassSummary> read_summary_csv(
    const std::filesystem::path& path) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line) || line != kSummaryHeader)
    throw std::runtime_error(path.string() + ": missing summary header");
  std::vector<ClassSummary> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 7)
      throw std::runtime_error(path.string() + ": expected 7 columns");
    ClassSummary s;
    s.class_id = fields[0];
    s.scenario = fields[1];
    s.arch = fields[2];
    s.n_included = parse_int(fields[3], path.string());
    s.n_excluded = parse_int(fields[4], path.string());
    s.mean_pct_optimal = parse_double(fields[5], path.string());
    s.prop_above_threshold = parse_double(fields[6], path.string());
    rows.push_back(std::move(s));
  }
  return rows;
}

void write_plotdata(const std::filesystem::path& summary_csv,
                    const std::filesystem::path& out_prefix) {
  const auto rows = read_summary_csv(summary_csv);
  const char* arches[] = {"nn", "ols", "svr"};

  auto pivot = [&](const char* suffix, auto value_of) {
    // (scenario, class) -> arch -> value
    std::map<std::pair<std::string, std::string>,
             std::map<std::string, double>>
        cells;
    for (const ClassSummary& s : rows)
      cells[{s.scenario, s.class_id}][s.arch] = value_of(s);
    auto out = open_output(out_prefix.string() + suffix);
    out << "scenario,class,nn,ols,svr\n";
    for (const auto& [key, by_arch] : cells) {
      out << key.first << ',' << key.second;
      for (const char* arch : arches) {
        const auto it = by_arch.find(arch);
        out << ',' << (it == by_arch.end() ? std::string("nan")
                                           : fmt_double(it->second));
      }
      out << '\n';
    }
  };

  pivot("_mean_pct.csv",
        [](const ClassSummary& s) { return s.mean_pct_optimal; });
  pivot("_prop_gt_80.csv",
        [](const ClassSummary& s) { return s.prop_above_threshold; });
}

void append_round_diagnostics_csv(const std::filesystem::path& path,
                                  const std::string& run_label,
                                  const RoundDiagnostics& row) {
  const bool fresh =
      !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  auto out = open_output(path, /*append=*/true);
  if (fresh)
    out << "run,round,rows,train_loss,val_loss,mean_revenue,fallbacks\n";
  out << run_label << ',' << row.round << ',' << row.dataset_rows << ','
      << fmt_double(row.train_loss) << ',' << fmt_double(row.val_loss) << ','
      << fmt_double(row.mean_revenue) << ',' << row.fallbacks << '\n';
}

}  // namespace snes
