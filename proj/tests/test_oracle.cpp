#include <doctest.h>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "snes/oracle.hpp"
#include "snes/rng.hpp"

using namespace snes;

namespace {

BatteryParams tiny_params(int capacity, bool low_efficiency) {
  BatteryParams p = low_efficiency ? BatteryParams::low_efficiency()
                                   : BatteryParams::high_efficiency();
  p.capacity = capacity;
  p.inject_rate = 2;
  p.withdraw_rate = 2;
  return p;
}

ExogenousState random_state(RngStream& rng) {
  ExogenousState w;
  w.energy = rng.uniform_int(1, 7);
  w.demand = rng.uniform_int(1, 15);
  w.buy_price = rng.uniform_int(3, 13);
  w.sell_price = std::min(rng.uniform_int(2, 12), w.buy_price);
  return w;
}

DeterministicInstance random_tiny_instance(RngStream& rng) {
  DeterministicInstance inst;
  const int horizon = rng.uniform_int(1, 4);
  const int capacity = rng.uniform_int(2, 4);
  inst.params = tiny_params(capacity, rng.uniform01() < 0.5);
  inst.initial_storage = rng.uniform_int(0, capacity);
  for (int t = 0; t < horizon; ++t) inst.trajectory.push_back(random_state(rng));
  return inst;
}

// Exhaustive-policy oracle for the stochastic problem: enumerates every
// deterministic Markov policy map and evaluates it exactly, recording the
// best achievable value at every (t, prior, w). Only viable on tiny models.
struct PolicyEnumerationOracle {
  std::vector<std::vector<std::vector<double>>> best;  // [t-1][prior][w]

  PolicyEnumerationOracle(const MarkovExogenousModel& model,
                          const BatteryParams& params, int horizon,
                          double discount) {
    const int levels = params.capacity + 1;
    const int n_w = static_cast<int>(model.states.size());
    best.assign(horizon, std::vector<std::vector<double>>(
                             levels, std::vector<double>(
                                         n_w, -std::numeric_limits<double>::infinity())));

    // Flatten the state space: one action slot per (t, prior, w).
    struct Slot {
      int t, prior, w;
      std::vector<int> actions;  // candidate storage levels
    };
    std::vector<Slot> slots;
    for (int t = 1; t <= horizon; ++t)
      for (int prior = 0; prior < levels; ++prior)
        for (int w = 0; w < n_w; ++w) {
          Slot slot{t, prior, w, {}};
          const StorageRange range =
              feasible_storage_range(prior, params, t == horizon);
          for (int next = range.lo; next <= range.hi; ++next)
            slot.actions.push_back(next);
          slots.push_back(std::move(slot));
        }

    std::vector<std::size_t> pick(slots.size(), 0);
    const auto value_of_policy = [&] {
      // Backward evaluation of the fixed policy.
      std::vector<std::vector<double>> next_value(
          levels, std::vector<double>(n_w, 0.0));
      std::vector<std::vector<std::vector<double>>> value(
          horizon,
          std::vector<std::vector<double>>(levels, std::vector<double>(n_w)));
      std::size_t slot_idx = slots.size();
      for (int t = horizon; t >= 1; --t) {
        std::vector<std::vector<double>> cur(levels,
                                             std::vector<double>(n_w));
        // slots are grouped by t in ascending order
        const std::size_t begin = slot_idx - levels * n_w;
        for (std::size_t s = begin; s < slot_idx; ++s) {
          const Slot& slot = slots[s];
          const int chosen = slot.actions[pick[s]];
          const ExogenousState& w = model.states[slot.w];
          const Decision d = derive_decision(w.energy, w.demand, chosen,
                                             slot.prior, slot.t, horizon,
                                             params);
          double v = stage_profit(d, slot.prior, w, params);
          if (t < horizon && discount != 0.0) {
            double expect = 0.0;
            for (int wn = 0; wn < n_w; ++wn)
              expect += model.transition[slot.w][wn] * next_value[chosen][wn];
            v += discount * expect;
          }
          cur[slot.prior][slot.w] = v;
        }
        value[t - 1] = cur;
        next_value = cur;
        slot_idx = begin;
      }
      return value;
    };

    // Odometer over every policy map.
    while (true) {
      const auto value = value_of_policy();
      for (int t = 1; t <= horizon; ++t)
        for (int prior = 0; prior < levels; ++prior)
          for (int w = 0; w < n_w; ++w)
            best[t - 1][prior][w] =
                std::max(best[t - 1][prior][w], value[t - 1][prior][w]);
      std::size_t i = 0;
      for (; i < slots.size(); ++i) {
        if (++pick[i] < slots[i].actions.size()) break;
        pick[i] = 0;
      }
      if (i == slots.size()) break;
    }
  }
};

}  // namespace

TEST_SUITE_BEGIN("oracle");

TEST_CASE("no trade is optimal when prices never cross and demand is met") {
  DeterministicInstance inst;
  inst.params = BatteryParams::high_efficiency();
  for (int t = 0; t < 5; ++t) inst.trajectory.push_back({4, 4, 13, 2});
  const OracleSolution sol = solve_deterministic(inst);
  CHECK(sol.revenue == 0.0);
  for (const ActionLabel label : sol.labels)
    CHECK(label == ActionLabel::do_nothing);
}

TEST_CASE("single-period surplus is sold outright") {
  DeterministicInstance inst;
  inst.params = BatteryParams::high_efficiency();
  inst.trajectory.push_back({5, 2, 13, 12});
  const OracleSolution sol = solve_deterministic(inst);
  CHECK(sol.revenue == doctest::Approx(36.0).epsilon(1e-12));
  CHECK(sol.decisions[0] == Decision{0, 3, 0});
  CHECK(sol.labels[0] == ActionLabel::sell);
}

TEST_CASE("dp matches brute force on random tiny instances") {
  RngStream rng(2024);
  for (int i = 0; i < 80; ++i) {
    const DeterministicInstance inst = random_tiny_instance(rng);
    const OracleSolution dp = solve_deterministic(inst);
    const OracleSolution bf = brute_force_deterministic(inst);
    CHECK(std::abs(dp.revenue - bf.revenue) <= 1e-9);
    CHECK(check_ip_feasibility(dp, inst).empty());
    CHECK(check_ip_feasibility(bf, inst).empty());
    for (std::size_t t = 0; t < dp.decisions.size(); ++t)
      CHECK(dp.decisions[t].buy * dp.decisions[t].sell == 0);
  }
}

TEST_CASE("brute force refuses oversized instances") {
  DeterministicInstance inst;
  inst.params = BatteryParams::high_efficiency();  // capacity 30
  for (int t = 0; t < 10; ++t) inst.trajectory.push_back({4, 4, 9, 8});
  CHECK_THROWS_AS(brute_force_deterministic(inst), std::invalid_argument);
}

TEST_CASE("optimal revenue is monotone in the battery parameters") {
  RngStream rng(515);
  for (int i = 0; i < 20; ++i) {
    DeterministicInstance inst = random_tiny_instance(rng);

    DeterministicInstance bigger = inst;
    bigger.params.capacity += 2;
    CHECK(solve_deterministic(bigger).revenue >=
          solve_deterministic(inst).revenue - 1e-12);

    DeterministicInstance faster = inst;
    if (faster.params.inject_rate < faster.params.capacity)
      faster.params.inject_rate += 1;
    if (faster.params.withdraw_rate < faster.params.capacity)
      faster.params.withdraw_rate += 1;
    CHECK(solve_deterministic(faster).revenue >=
          solve_deterministic(inst).revenue - 1e-12);

    DeterministicInstance pricier = inst;
    pricier.params.hold_cost *= 2.0;
    CHECK(solve_deterministic(pricier).revenue <=
          solve_deterministic(inst).revenue + 1e-12);

    DeterministicInstance lossier = inst;
    lossier.params.inject_loss = std::min(1.0, lossier.params.inject_loss + 0.1);
    lossier.params.withdraw_loss =
        std::min(1.0, lossier.params.withdraw_loss + 0.1);
    CHECK(solve_deterministic(lossier).revenue <=
          solve_deterministic(inst).revenue + 1e-12);
  }
}

TEST_CASE("with equal prices the storage path depends only on net demand") {
  RngStream rng(616);
  for (int i = 0; i < 20; ++i) {
    DeterministicInstance inst = random_tiny_instance(rng);
    for (ExogenousState& w : inst.trajectory) w.sell_price = w.buy_price;

    DeterministicInstance shifted = inst;
    for (ExogenousState& w : shifted.trajectory) {
      // move (E, D) while preserving net demand D - E
      if (w.energy < 7 && w.demand < 15) {
        w.energy += 1;
        w.demand += 1;
      }
    }
    const OracleSolution a = solve_deterministic(inst);
    const OracleSolution b = solve_deterministic(shifted);
    REQUIRE(a.decisions.size() == b.decisions.size());
    for (std::size_t t = 0; t < a.decisions.size(); ++t)
      CHECK(a.decisions[t].store == b.decisions[t].store);
  }
}

TEST_CASE("ip feasibility checker flags corrupted solutions") {
  DeterministicInstance inst;
  inst.params = tiny_params(4, false);
  inst.trajectory = {{3, 5, 10, 8}, {6, 2, 9, 9}, {4, 4, 12, 3}};
  OracleSolution sol = solve_deterministic(inst);
  REQUIRE(check_ip_feasibility(sol, inst).empty());

  SUBCASE("flow balance break") {
    sol.decisions[0].buy += 1;
    CHECK_FALSE(check_ip_feasibility(sol, inst).empty());
  }
  SUBCASE("two action types in one period") {
    sol.decisions[1].buy += 3;
    sol.decisions[1].sell += 3;
    const auto violations = check_ip_feasibility(sol, inst);
    bool flagged = false;
    for (const auto& v : violations)
      flagged |= v.find("more than one action type") != std::string::npos;
    CHECK(flagged);
  }
  SUBCASE("injection beyond the rate limit") {
    // hand-build a path that jumps by inject_rate + 1
    sol.decisions[0] = Decision{5, 0, 3};  // prior 0, delta 3 > 2
    sol.labels[0] = ActionLabel::buy_inject;
    const auto violations = check_ip_feasibility(sol, inst);
    bool flagged = false;
    for (const auto& v : violations)
      flagged |= v.find("injection beyond the rate") != std::string::npos;
    CHECK(flagged);
  }
  SUBCASE("label inconsistent with the decision") {
    sol.labels[0] = ActionLabel::do_nothing;
    const auto violations = check_ip_feasibility(sol, inst);
    bool flagged = false;
    for (const auto& v : violations)
      flagged |= v.find("inconsistent") != std::string::npos;
    CHECK(flagged);
  }
}

TEST_CASE("exact mdp on a degenerate chain equals the deterministic dp") {
  // A deterministic W sequence encoded as a chain that walks w0 -> w1 -> w2.
  MarkovExogenousModel model;
  model.states = {{3, 5, 10, 8}, {6, 2, 9, 9}, {4, 4, 12, 3}};
  model.initial = {1.0, 0.0, 0.0};
  model.transition = {{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {0.0, 0.0, 1.0}};
  const BatteryParams params = tiny_params(3, false);

  const MdpSolution mdp = solve_exact_mdp(model, params, 3, 1.0);

  DeterministicInstance inst;
  inst.params = params;
  inst.trajectory = model.states;
  for (int r0 = 0; r0 <= 3; ++r0) {
    inst.initial_storage = r0;
    CHECK(mdp.value_at(1, r0, 0) ==
          doctest::Approx(solve_deterministic(inst).revenue).epsilon(1e-12));
  }
}

TEST_CASE("zero discount reduces the mdp to the myopic problem") {
  MarkovExogenousModel model;
  model.states = {{3, 3, 6, 5}, {3, 3, 12, 11}};
  model.initial = {0.5, 0.5};
  model.transition = {{0.5, 0.5}, {0.5, 0.5}};
  const BatteryParams params = tiny_params(2, false);
  const int horizon = 3;

  const MdpSolution mdp = solve_exact_mdp(model, params, horizon, 0.0);
  for (int t = 1; t <= horizon; ++t)
    for (int prior = 0; prior <= 2; ++prior)
      for (int w = 0; w < 2; ++w) {
        const StorageRange range =
            feasible_storage_range(prior, params, t == horizon);
        double best = -std::numeric_limits<double>::infinity();
        for (int next = range.lo; next <= range.hi; ++next) {
          const Decision d =
              derive_decision(model.states[w].energy, model.states[w].demand,
                              next, prior, t, horizon, params);
          best = std::max(best,
                          stage_profit(d, prior, model.states[w], params));
        }
        CHECK(mdp.value_at(t, prior, w) == doctest::Approx(best).epsilon(1e-12));
      }
}

TEST_CASE("exact mdp matches exhaustive policy enumeration") {
  MarkovExogenousModel model;
  model.states = {{3, 3, 5, 4}, {3, 3, 11, 10}};  // low-price and high-price
  model.initial = {0.6, 0.4};
  model.transition = {{0.7, 0.3}, {0.4, 0.6}};
  BatteryParams params = tiny_params(2, false);
  params.inject_rate = 1;
  params.withdraw_rate = 1;
  const int horizon = 3;

  const MdpSolution mdp = solve_exact_mdp(model, params, horizon, 1.0);
  const PolicyEnumerationOracle oracle(model, params, horizon, 1.0);

  for (int t = 1; t <= horizon; ++t)
    for (int prior = 0; prior <= 2; ++prior)
      for (int w = 0; w < 2; ++w)
        CHECK(std::abs(mdp.value_at(t, prior, w) -
                       oracle.best[t - 1][prior][w]) <= 1e-9);
}

TEST_CASE("mdp values satisfy the recursion at every state") {
  MarkovExogenousModel model;
  model.states = {{2, 6, 8, 7}, {5, 3, 10, 4}, {7, 1, 5, 5}};
  model.initial = {0.2, 0.5, 0.3};
  model.transition = {
      {0.1, 0.6, 0.3}, {0.3, 0.3, 0.4}, {0.5, 0.25, 0.25}};
  const BatteryParams params = tiny_params(4, true);
  const int horizon = 4;
  const double discount = 1.0;

  const MdpSolution mdp = solve_exact_mdp(model, params, horizon, discount);
  for (int t = 1; t <= horizon; ++t)
    for (int prior = 0; prior <= 4; ++prior)
      for (int w = 0; w < 3; ++w) {
        const StorageRange range =
            feasible_storage_range(prior, params, t == horizon);
        double best = -std::numeric_limits<double>::infinity();
        for (int next = range.lo; next <= range.hi; ++next) {
          const Decision d =
              derive_decision(model.states[w].energy, model.states[w].demand,
                              next, prior, t, horizon, params);
          double v = stage_profit(d, prior, model.states[w], params);
          if (t < horizon) {
            double expect = 0.0;
            for (int wn = 0; wn < 3; ++wn)
              expect += model.transition[w][wn] * mdp.value_at(t + 1, next, wn);
            v += discount * expect;
          }
          best = std::max(best, v);
        }
        CHECK(std::abs(mdp.value_at(t, prior, w) - best) <= 1e-9);
      }
}

TEST_CASE("malformed transition models are rejected") {
  MarkovExogenousModel model;
  model.states = {{3, 3, 5, 4}, {3, 3, 11, 10}};
  model.initial = {0.6, 0.4};
  model.transition = {{0.7, 0.4}, {0.4, 0.6}};  // first row sums to 1.1
  CHECK_THROWS_AS(
      solve_exact_mdp(model, BatteryParams::high_efficiency(), 3, 1.0),
      std::invalid_argument);
}

TEST_SUITE_END();
