#include "snes/model.hpp"

#include <algorithm>
#include <stdexcept>

namespace snes {

BatteryParams BatteryParams::high_efficiency() {
  BatteryParams p;
  p.inject_loss = 0.05;
  p.withdraw_loss = 0.05;
  return p;
}

BatteryParams BatteryParams::low_efficiency() {
  BatteryParams p;
  p.inject_loss = 0.3;
  p.withdraw_loss = 0.3;
  return p;
}

void BatteryParams::validate() const {
  if (capacity < 0)
    throw std::invalid_argument("BatteryParams: capacity must be nonnegative");
  if (inject_rate <= 0 || withdraw_rate <= 0)
    throw std::invalid_argument(
        "BatteryParams: inject/withdraw rates must be positive");
  if (inject_rate > capacity || withdraw_rate > capacity)
    throw std::invalid_argument(
        "BatteryParams: inject/withdraw rates cannot exceed capacity");
  if (hold_cost < 0.0)
    throw std::invalid_argument("BatteryParams: hold_cost must be nonnegative");
  if (inject_loss < 0.0 || inject_loss > 1.0 || withdraw_loss < 0.0 ||
      withdraw_loss > 1.0)
    throw std::invalid_argument(
        "BatteryParams: loss fractions must lie in [0, 1]");
}

StorageRange feasible_storage_range(int prior, const BatteryParams& params,
                                    bool is_terminal) {
  if (prior < 0 || prior > params.capacity)
    throw std::domain_error(
        "feasible_storage_range: prior level outside [0, capacity]");
  StorageRange r;
  r.lo = std::max(0, prior - params.withdraw_rate);
  r.hi = is_terminal ? prior
                     : std::min(params.capacity, prior + params.inject_rate);
  return r;
}

std::pair<int, int> compute_decisions(int energy, int demand, int store_new,
                                      int store_prev, int t, int horizon,
                                      const BatteryParams& params) {
  const StorageRange range =
      feasible_storage_range(store_prev, params, t == horizon);
  if (!range.contains(store_new))
    throw std::domain_error(
        "compute_decisions: target storage level is not reachable");
  const int surplus = energy - demand - (store_new - store_prev);
  if (surplus >= 0) return {0, surplus};
  return {-surplus, 0};
}

Decision derive_decision(int energy, int demand, int store_new,
                         int store_prev, int t, int horizon,
                         const BatteryParams& params) {
  const auto [buy, sell] = compute_decisions(energy, demand, store_new,
                                             store_prev, t, horizon, params);
  return Decision{buy, sell, store_new};
}

double stage_profit(const Decision& d, int prior_store,
                    const ExogenousState& w, const BatteryParams& params) {
  const int delta = d.store - prior_store;
  const double loss_units =
      params.inject_loss * std::max(delta, 0) +
      params.withdraw_loss * std::max(-delta, 0);
  return static_cast<double>(w.sell_price) * d.sell -
         static_cast<double>(w.buy_price) * d.buy -
         params.hold_cost * d.store -
         static_cast<double>(w.buy_price) * loss_units;
}

Decision naive_policy(const StageState& state, const BatteryParams& params,
                      int horizon) {
  Decision d;
  d.buy = state.w.demand;
  if (state.t < horizon) {
    d.sell = state.w.energy;
    d.store = state.prior_store;
  } else {
    // The terminal withdrawal is clamped to the available level so the
    // resulting storage can never go negative.
    const int withdrawn = std::min(params.withdraw_rate, state.prior_store);
    d.sell = state.w.energy + withdrawn;
    d.store = state.prior_store - withdrawn;
  }
  return d;
}

std::vector<std::string> validate_decision(const Decision& d,
                                           const StageState& state,
                                           const BatteryParams& params) {
  std::vector<std::string> violations;
  if (d.buy < 0 || d.sell < 0 || d.store < 0)
    violations.push_back("nonnegativity: buy/sell/store must be >= 0");
  if (d.store > params.capacity)
    violations.push_back("capacity: store exceeds battery capacity");
  const int delta = d.store - state.prior_store;
  if (delta > params.inject_rate)
    violations.push_back("rate limit: injection exceeds inject_rate");
  if (-delta > params.withdraw_rate)
    violations.push_back("rate limit: withdrawal exceeds withdraw_rate");
  if (d.buy - d.store - d.sell !=
      state.w.demand - state.w.energy - state.prior_store)
    violations.push_back("flow balance: buy - store - sell != net demand - "
                         "prior storage");
  if (d.buy > 0 && d.sell > 0)
    violations.push_back("buy-xor-sell: buying and selling in one period");
  return violations;
}

bool violates_flow_constraints(const Decision& d, const StageState& state,
                               const BatteryParams& params) {
  for (const auto& v : validate_decision(d, state, params)) {
    if (v.rfind("buy-xor-sell", 0) != 0) return true;
  }
  return false;
}

}  // namespace snes
