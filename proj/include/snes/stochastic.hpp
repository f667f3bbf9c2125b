#pragma once

#include <vector>

#include "snes/rng.hpp"

namespace snes {

// Integer-valued noise distribution: a Gaussian draw rounded to the nearest
// integer (ties away from zero) and clamped onto a symmetric support set.
// sigma == 0 degenerates to the point mass at 0.
struct DiscretizedGaussian {
  double sigma = 0.0;
  std::vector<int> support;  // sorted ascending, symmetric, contains 0

  // Support {0, ±1, ..., ±max_abs}.
  static DiscretizedGaussian over_range(double sigma, int max_abs);
  void validate() const;
};

// Renewable-production increment: either discretized-Gaussian or uniform
// over {0, ±1}.
struct EnergyNoise {
  enum class Kind { pseudonormal, uniform_unit };
  Kind kind = Kind::pseudonormal;
  DiscretizedGaussian dist;  // pseudonormal parameters; unused for uniform

  static EnergyNoise pseudonormal(double sigma, int max_abs);
  static EnergyNoise uniform_unit();
  void validate() const;
};

// Price evolution: first-order Markov chain, optionally with rare jump
// shocks added to the increment.
struct PriceProcessKind {
  enum class Variant { markov_chain, markov_chain_with_jumps };
  Variant variant = Variant::markov_chain;
  double jump_prob = 0.0;          // used only with jumps
  DiscretizedGaussian jump_dist;   // used only with jumps

  static PriceProcessKind markov_chain();
  static PriceProcessKind with_jumps(double jump_prob,
                                     DiscretizedGaussian jump_dist);
  void validate() const;
};

struct ProcessConfig {
  int demand_min = 1;
  int demand_max = 15;
  int energy_min = 1;
  int energy_max = 7;
  int buy_min = 3;
  int buy_max = 13;
  int sell_min = 2;
  int sell_max = 12;
  DiscretizedGaussian demand_noise;  // PN(0, 2^2) over {0, ±1, ±2}
  EnergyNoise energy_noise;          // PN(0, 3^2) over {0, ..., ±5}
  DiscretizedGaussian price_noise;   // per-class sigma over {0, ..., ±8}
  PriceProcessKind price_kind;
  int horizon = 10;

  static ProcessConfig defaults();
  void validate() const;
};

// One period's exogenous realization: renewable production, demand,
// buying price, selling price. sell_price <= buy_price always holds on
// sampled states.
struct ExogenousState {
  int energy = 0;
  int demand = 0;
  int buy_price = 0;
  int sell_price = 0;

  bool operator==(const ExogenousState&) const = default;
};

int sample_discretized_gaussian(const DiscretizedGaussian& dist,
                                RngStream& rng);
int sample_energy_noise(const EnergyNoise& noise, RngStream& rng);

// Seasonal demand: floor(3 - 4 sin(2 pi t / T)) + noise, clamped to bounds.
// t is 1-based; requires 1 <= t <= horizon.
int next_demand(int t, const ProcessConfig& cfg, RngStream& rng);

// Markov production level: previous level plus increment, clamped.
int next_energy(int energy_prev, const ProcessConfig& cfg, RngStream& rng);

struct PriceStep {
  int price = 0;
  bool jump_drawn = false;  // jump indicator was sampled this step
  bool jump_fired = false;
};

PriceStep next_price_step(int price_prev, int lo, int hi,
                          const PriceProcessKind& kind,
                          const DiscretizedGaussian& noise, RngStream& rng);

int next_price(int price_prev, int lo, int hi, const PriceProcessKind& kind,
               const DiscretizedGaussian& noise, RngStream& rng);

struct SampledTrajectory {
  std::vector<ExogenousState> steps;  // length = horizon
  long jump_draws = 0;                // price-jump indicators sampled
  long jump_fires = 0;                // of those, how many fired
};

// Full horizon of exogenous states. Period 1 draws energy and both prices
// uniformly on their ranges and demand from the seasonal formula; later
// periods chain the per-process samplers. After both prices are drawn the
// selling price is capped at the buying price.
SampledTrajectory sample_trajectory(const ProcessConfig& cfg, RngStream& rng);

}  // namespace snes
