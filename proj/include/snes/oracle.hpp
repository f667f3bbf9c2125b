#pragma once

#include <string>
#include <vector>

#include "snes/model.hpp"

namespace snes {

// A fully revealed exogenous trajectory plus the battery it is solved
// against: the hindsight problem.
struct DeterministicInstance {
  std::vector<ExogenousState> trajectory;
  BatteryParams params;
  int initial_storage = 0;

  void validate() const;
};

// The nine mutually exclusive per-period action types of the integer
// program over the deterministic problem.
enum class ActionLabel {
  buy_inject,
  sell_inject,
  inject,
  buy_withdraw,
  sell_withdraw,
  withdraw,
  buy,
  sell,
  do_nothing,
};

const char* to_string(ActionLabel label);

// Label implied by the signs of (buy, sell, store - prior). Throws
// std::domain_error when buy and sell are both positive (no single action
// type covers that).
ActionLabel classify_action(const Decision& d, int prior_store);

struct OracleSolution {
  double revenue = 0.0;
  std::vector<Decision> decisions;
  std::vector<ActionLabel> labels;
  std::vector<double> stage_profits;
};

// Hindsight optimum by exact dynamic programming over (period, battery
// level). Ties in the per-state argmax go to the smallest storage level so
// traces are reproducible. The terminal period forbids injection.
OracleSolution solve_deterministic(const DeterministicInstance& inst);

// Independent check: exhaustive enumeration of every feasible storage
// path. Refuses instances with (capacity+1)^T > 10^6 paths.
OracleSolution brute_force_deterministic(const DeterministicInstance& inst);

// Verifies a solution against the integer-program constraint system of the
// deterministic problem (one action type per period, rate limits linked to
// the action indicators, big-M linking of the injection/withdrawal
// quantities, flow balance, capacity, nonnegativity). Returns one message
// per violated constraint.
std::vector<std::string> check_ip_feasibility(const OracleSolution& sol,
                                              const DeterministicInstance& inst);

// Enumerated Markov model over the exogenous state, time-homogeneous.
struct MarkovExogenousModel {
  std::vector<ExogenousState> states;
  std::vector<double> initial;                  // P(W_1 = states[i])
  std::vector<std::vector<double>> transition;  // row i: P(next | states[i])

  void validate() const;  // rows and initial must sum to 1 within 1e-12
};

// Finite-horizon value tables V_t(prior storage, exogenous index) for the
// exact stochastic problem, with the greedy storage choice alongside.
struct MdpSolution {
  int horizon = 0;
  int capacity = 0;
  // value[t-1][prior][w] for t = 1..horizon.
  std::vector<std::vector<std::vector<double>>> value;
  std::vector<std::vector<std::vector<int>>> best_store;

  double value_at(int t, int prior, int w) const {
    return value.at(t - 1).at(prior).at(w);
  }
  // Expected optimal total profit from a given initial storage level,
  // taking the model's initial distribution over W_1.
  double expected_value(int initial_storage,
                        const MarkovExogenousModel& model) const;
};

// Backward induction over (t, battery level, exogenous state) with an
// explicit expectation over the transition rows. Guards the state-space
// size at |W| * (capacity+1) * horizon <= 10^6.
MdpSolution solve_exact_mdp(const MarkovExogenousModel& model,
                            const BatteryParams& params, int horizon,
                            double discount);

}  // namespace snes
