#include "snes/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace snes {

namespace {

bool is_inject(ActionLabel l) {
  return l == ActionLabel::buy_inject || l == ActionLabel::sell_inject ||
         l == ActionLabel::inject;
}

bool is_withdraw(ActionLabel l) {
  return l == ActionLabel::buy_withdraw || l == ActionLabel::sell_withdraw ||
         l == ActionLabel::withdraw;
}

// Rebuilds decisions/labels/profits along a chosen storage path.
OracleSolution assemble_solution(const std::vector<int>& path,
                                 const DeterministicInstance& inst) {
  const int horizon = static_cast<int>(inst.trajectory.size());
  OracleSolution sol;
  sol.decisions.reserve(horizon);
  sol.labels.reserve(horizon);
  sol.stage_profits.reserve(horizon);
  int prior = inst.initial_storage;
  for (int t = 1; t <= horizon; ++t) {
    const ExogenousState& w = inst.trajectory[t - 1];
    const Decision d = derive_decision(w.energy, w.demand, path[t - 1], prior,
                                       t, horizon, inst.params);
    const double profit = stage_profit(d, prior, w, inst.params);
    sol.revenue += profit;
    sol.decisions.push_back(d);
    sol.labels.push_back(classify_action(d, prior));
    sol.stage_profits.push_back(profit);
    prior = d.store;
  }
  return sol;
}

}  // namespace

void DeterministicInstance::validate() const {
  params.validate();
  if (trajectory.empty())
    throw std::invalid_argument(
        "DeterministicInstance: trajectory must be nonempty");
  if (initial_storage < 0 || initial_storage > params.capacity)
    throw std::invalid_argument(
        "DeterministicInstance: initial storage outside [0, capacity]");
}

const char* to_string(ActionLabel label) {
  switch (label) {
    case ActionLabel::buy_inject: return "buy-inject";
    case ActionLabel::sell_inject: return "sell-inject";
    case ActionLabel::inject: return "inject";
    case ActionLabel::buy_withdraw: return "buy-withdraw";
    case ActionLabel::sell_withdraw: return "sell-withdraw";
    case ActionLabel::withdraw: return "withdraw";
    case ActionLabel::buy: return "buy";
    case ActionLabel::sell: return "sell";
    case ActionLabel::do_nothing: return "do-nothing";
  }
  return "?";
}

ActionLabel classify_action(const Decision& d, int prior_store) {
  if (d.buy > 0 && d.sell > 0)
    throw std::domain_error(
        "classify_action: simultaneous buy and sell has no action type");
  const int delta = d.store - prior_store;
  if (d.buy > 0)
    return delta > 0 ? ActionLabel::buy_inject
           : delta < 0 ? ActionLabel::buy_withdraw
                       : ActionLabel::buy;
  if (d.sell > 0)
    return delta > 0 ? ActionLabel::sell_inject
           : delta < 0 ? ActionLabel::sell_withdraw
                       : ActionLabel::sell;
  return delta > 0 ? ActionLabel::inject
         : delta < 0 ? ActionLabel::withdraw
                     : ActionLabel::do_nothing;
}

OracleSolution solve_deterministic(const DeterministicInstance& inst) {
  inst.validate();
  const int horizon = static_cast<int>(inst.trajectory.size());
  const int levels = inst.params.capacity + 1;

  // value[r] holds V_{t+1}; rebuilt in place walking t backwards.
  std::vector<double> value(levels, 0.0);
  std::vector<std::vector<int>> choice(
      horizon, std::vector<int>(levels, 0));

  for (int t = horizon; t >= 1; --t) {
    const ExogenousState& w = inst.trajectory[t - 1];
    std::vector<double> stage_value(levels);
    for (int prior = 0; prior < levels; ++prior) {
      const StorageRange range =
          feasible_storage_range(prior, inst.params, t == horizon);
      double best = -std::numeric_limits<double>::infinity();
      int best_store = range.lo;
      for (int next = range.lo; next <= range.hi; ++next) {
        const Decision d = derive_decision(w.energy, w.demand, next, prior, t,
                                           horizon, inst.params);
        const double v = stage_profit(d, prior, w, inst.params) + value[next];
        if (v > best) {  // strict: ties keep the smallest storage level
          best = v;
          best_store = next;
        }
      }
      stage_value[prior] = best;
      choice[t - 1][prior] = best_store;
    }
    value = std::move(stage_value);
  }

  std::vector<int> path(horizon);
  int prior = inst.initial_storage;
  for (int t = 1; t <= horizon; ++t) {
    path[t - 1] = choice[t - 1][prior];
    prior = path[t - 1];
  }
  return assemble_solution(path, inst);
}

OracleSolution brute_force_deterministic(const DeterministicInstance& inst) {
  inst.validate();
  const int horizon = static_cast<int>(inst.trajectory.size());
  const int levels = inst.params.capacity + 1;
  if (std::pow(static_cast<double>(levels), horizon) > 1e6)
    throw std::invalid_argument(
        "brute_force_deterministic: instance too large to enumerate "
        "((capacity+1)^T > 1e6)");

  std::vector<int> path(horizon, 0);
  std::vector<int> best_path;
  double best_revenue = -std::numeric_limits<double>::infinity();

  // Depth-first over all feasible storage paths, ascending at each level so
  // the first optimum found is the lexicographically smallest one.
  auto recurse = [&](auto&& self, int t, int prior, double revenue) -> void {
    if (t > horizon) {
      if (revenue > best_revenue) {
        best_revenue = revenue;
        best_path = path;
      }
      return;
    }
    const ExogenousState& w = inst.trajectory[t - 1];
    const StorageRange range =
        feasible_storage_range(prior, inst.params, t == horizon);
    for (int next = range.lo; next <= range.hi; ++next) {
      const Decision d = derive_decision(w.energy, w.demand, next, prior, t,
                                         horizon, inst.params);
      path[t - 1] = next;
      self(self, t + 1, next, revenue + stage_profit(d, prior, w, inst.params));
    }
  };
  recurse(recurse, 1, inst.initial_storage, 0.0);
  return assemble_solution(best_path, inst);
}

std::vector<std::string> check_ip_feasibility(
    const OracleSolution& sol, const DeterministicInstance& inst) {
  std::vector<std::string> violations;
  const int horizon = static_cast<int>(inst.trajectory.size());
  auto note = [&](int t, const std::string& msg) {
    violations.push_back("t=" + std::to_string(t) + ": " + msg);
  };
  if (static_cast<int>(sol.decisions.size()) != horizon ||
      sol.labels.size() != sol.decisions.size()) {
    violations.push_back("solution length does not match the instance horizon");
    return violations;
  }

  const int big_m = std::max(inst.params.inject_rate,
                             inst.params.withdraw_rate);
  int prior = inst.initial_storage;
  for (int t = 1; t <= horizon; ++t) {
    const Decision& d = sol.decisions[t - 1];
    const ActionLabel label = sol.labels[t - 1];
    const ExogenousState& w = inst.trajectory[t - 1];
    const int delta = d.store - prior;

    // one action type per period, consistent with the decision's signs
    if (d.buy > 0 && d.sell > 0)
      note(t, "more than one action type active (buy and sell)");
    else if (label != classify_action(d, prior))
      note(t, "action indicator inconsistent with the decision");

    // rate limits gated by the action indicators
    if (delta > (is_inject(label) ? inst.params.inject_rate : 0))
      note(t, "injection beyond the rate allowed by the action indicator");
    if (-delta > (is_withdraw(label) ? inst.params.withdraw_rate : 0))
      note(t, "withdrawal beyond the rate allowed by the action indicator");

    // big-M linking of the injection/withdrawal quantities
    const int inject_units = std::max(delta, 0);
    const int withdraw_units = std::max(-delta, 0);
    if (inject_units > (is_inject(label) ? big_m : 0))
      note(t, "injection quantity positive without an inject indicator");
    if (withdraw_units > (is_withdraw(label) ? big_m : 0))
      note(t, "withdrawal quantity positive without a withdraw indicator");
    if (inject_units < delta) note(t, "injection quantities below the delta");
    if (withdraw_units < -delta)
      note(t, "withdrawal quantities below the negative delta");

    // balance, capacity, nonnegativity
    if (d.buy - d.store - d.sell != w.demand - w.energy - prior)
      note(t, "flow balance violated");
    if (d.store > inst.params.capacity) note(t, "capacity exceeded");
    if (d.buy < 0 || d.sell < 0 || d.store < 0) note(t, "negative quantity");

    prior = d.store;
  }
  return violations;
}

void MarkovExogenousModel::validate() const {
  if (states.empty())
    throw std::invalid_argument("MarkovExogenousModel: no states");
  const std::size_t n = states.size();
  if (initial.size() != n || transition.size() != n)
    throw std::invalid_argument(
        "MarkovExogenousModel: initial/transition sizes must match states");
  double total = 0.0;
  for (const double p : initial) {
    if (p < 0.0) throw std::invalid_argument(
        "MarkovExogenousModel: negative initial probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument(
        "MarkovExogenousModel: initial distribution must sum to 1");
  for (const auto& row : transition) {
    if (row.size() != n)
      throw std::invalid_argument(
          "MarkovExogenousModel: ragged transition matrix");
    double row_sum = 0.0;
    for (const double p : row) {
      if (p < 0.0) throw std::invalid_argument(
          "MarkovExogenousModel: negative transition probability");
      row_sum += p;
    }
    if (std::abs(row_sum - 1.0) > 1e-12)
      throw std::invalid_argument(
          "MarkovExogenousModel: transition row must sum to 1");
  }
}

double MdpSolution::expected_value(int initial_storage,
                                   const MarkovExogenousModel& model) const {
  double total = 0.0;
  for (std::size_t w = 0; w < model.states.size(); ++w)
    total += model.initial[w] * value_at(1, initial_storage, static_cast<int>(w));
  return total;
}

MdpSolution solve_exact_mdp(const MarkovExogenousModel& model,
                            const BatteryParams& params, int horizon,
                            double discount) {
  model.validate();
  params.validate();
  if (horizon < 1)
    throw std::invalid_argument("solve_exact_mdp: horizon must be positive");
  const int levels = params.capacity + 1;
  const std::size_t n_states = model.states.size();
  if (static_cast<double>(n_states) * levels * horizon > 1e6)
    throw std::invalid_argument(
        "solve_exact_mdp: state space too large (|W|*(capacity+1)*T > 1e6)");

  MdpSolution sol;
  sol.horizon = horizon;
  sol.capacity = params.capacity;
  sol.value.assign(horizon, std::vector<std::vector<double>>(
                                levels, std::vector<double>(n_states, 0.0)));
  sol.best_store.assign(horizon, std::vector<std::vector<int>>(
                                     levels, std::vector<int>(n_states, 0)));

  for (int t = horizon; t >= 1; --t) {
    for (int prior = 0; prior < levels; ++prior) {
      const StorageRange range =
          feasible_storage_range(prior, params, t == horizon);
      for (std::size_t wi = 0; wi < n_states; ++wi) {
        const ExogenousState& w = model.states[wi];
        double best = -std::numeric_limits<double>::infinity();
        int best_store = range.lo;
        for (int next = range.lo; next <= range.hi; ++next) {
          const Decision d = derive_decision(w.energy, w.demand, next, prior,
                                             t, horizon, params);
          double v = stage_profit(d, prior, w, params);
          if (t < horizon && discount != 0.0) {
            double expect = 0.0;
            for (std::size_t wn = 0; wn < n_states; ++wn)
              expect += model.transition[wi][wn] * sol.value[t][next][wn];
            v += discount * expect;
          }
          if (v > best) {
            best = v;
            best_store = next;
          }
        }
        sol.value[t - 1][prior][wi] = best;
        sol.best_store[t - 1][prior][wi] = best_store;
      }
    }
  }
  return sol;
}

}  // namespace snes
