#include "snes/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace snes {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}
}  // namespace

DiscretizedGaussian DiscretizedGaussian::over_range(double sigma,
                                                    int max_abs) {
  DiscretizedGaussian d;
  d.sigma = sigma;
  d.support.reserve(2 * max_abs + 1);
  for (int k = -max_abs; k <= max_abs; ++k) d.support.push_back(k);
  return d;
}

void DiscretizedGaussian::validate() const {
  require(sigma >= 0.0, "DiscretizedGaussian: sigma must be nonnegative");
  require(!support.empty(), "DiscretizedGaussian: support must be nonempty");
  require(std::is_sorted(support.begin(), support.end()),
          "DiscretizedGaussian: support must be sorted");
  require(std::binary_search(support.begin(), support.end(), 0),
          "DiscretizedGaussian: support must contain 0");
  const std::size_t n = support.size();
  for (std::size_t i = 0; i < n; ++i)  // sorted, so mirror-pair equality
    require(support[i] == -support[n - 1 - i],
            "DiscretizedGaussian: support must be symmetric around 0");
}

EnergyNoise EnergyNoise::pseudonormal(double sigma, int max_abs) {
  EnergyNoise n;
  n.kind = Kind::pseudonormal;
  n.dist = DiscretizedGaussian::over_range(sigma, max_abs);
  return n;
}

EnergyNoise EnergyNoise::uniform_unit() {
  EnergyNoise n;
  n.kind = Kind::uniform_unit;
  return n;
}

void EnergyNoise::validate() const {
  if (kind == Kind::pseudonormal) dist.validate();
}

PriceProcessKind PriceProcessKind::markov_chain() { return {}; }

PriceProcessKind PriceProcessKind::with_jumps(double jump_prob,
                                              DiscretizedGaussian jump_dist) {
  PriceProcessKind k;
  k.variant = Variant::markov_chain_with_jumps;
  k.jump_prob = jump_prob;
  k.jump_dist = std::move(jump_dist);
  return k;
}

void PriceProcessKind::validate() const {
  if (variant == Variant::markov_chain_with_jumps) {
    require(jump_prob >= 0.0 && jump_prob <= 1.0,
            "PriceProcessKind: jump probability must lie in [0, 1]");
    jump_dist.validate();
  }
}

ProcessConfig ProcessConfig::defaults() {
  ProcessConfig cfg;
  cfg.demand_noise = DiscretizedGaussian::over_range(2.0, 2);
  cfg.energy_noise = EnergyNoise::pseudonormal(3.0, 5);
  cfg.price_noise = DiscretizedGaussian::over_range(2.5, 8);
  cfg.price_kind = PriceProcessKind::with_jumps(
      0.031, DiscretizedGaussian::over_range(50.0, 40));
  return cfg;
}

void ProcessConfig::validate() const {
  require(demand_min <= demand_max && energy_min <= energy_max &&
              buy_min <= buy_max && sell_min <= sell_max,
          "ProcessConfig: every min bound must be <= its max bound");
  require(demand_min >= 0, "ProcessConfig: demand_min must be nonnegative");
  require(energy_min >= 0, "ProcessConfig: energy_min must be nonnegative");
  require(buy_min >= sell_min && buy_max >= sell_max,
          "ProcessConfig: buying-price bounds must dominate selling-price "
          "bounds");
  require(horizon >= 1, "ProcessConfig: horizon must be positive");
  demand_noise.validate();
  energy_noise.validate();
  price_noise.validate();
  price_kind.validate();
}

int sample_discretized_gaussian(const DiscretizedGaussian& dist,
                                RngStream& rng) {
  if (dist.sigma == 0.0) return 0;
  const double draw = rng.gaussian(dist.sigma);
  // lround rounds halfway cases away from zero.
  const long rounded = std::lround(draw);
  const long lo = dist.support.front();
  const long hi = dist.support.back();
  const int clamped = static_cast<int>(std::clamp(rounded, lo, hi));
  // Snap onto the support, which may have gaps; ties take the lower member.
  const auto above =
      std::lower_bound(dist.support.begin(), dist.support.end(), clamped);
  if (above != dist.support.end() && *above == clamped) return clamped;
  const int hi_member = *above;  // exists: clamped <= support.back()
  const int lo_member = *std::prev(above);
  return (clamped - lo_member <= hi_member - clamped) ? lo_member : hi_member;
}

int sample_energy_noise(const EnergyNoise& noise, RngStream& rng) {
  if (noise.kind == EnergyNoise::Kind::uniform_unit)
    return rng.uniform_int(-1, 1);
  return sample_discretized_gaussian(noise.dist, rng);
}

int next_demand(int t, const ProcessConfig& cfg, RngStream& rng) {
  if (t < 1 || t > cfg.horizon)
    throw std::invalid_argument("next_demand: t must lie in [1, horizon]");
  const double seasonal =
      std::floor(3.0 - 4.0 * std::sin(kTwoPi * t / cfg.horizon));
  const int noisy = static_cast<int>(seasonal) +
                    sample_discretized_gaussian(cfg.demand_noise, rng);
  return std::clamp(noisy, cfg.demand_min, cfg.demand_max);
}

int next_energy(int energy_prev, const ProcessConfig& cfg, RngStream& rng) {
  const int next = energy_prev + sample_energy_noise(cfg.energy_noise, rng);
  return std::clamp(next, cfg.energy_min, cfg.energy_max);
}

PriceStep next_price_step(int price_prev, int lo, int hi,
                          const PriceProcessKind& kind,
                          const DiscretizedGaussian& noise, RngStream& rng) {
  PriceStep step;
  int increment = sample_discretized_gaussian(noise, rng);
  if (kind.variant == PriceProcessKind::Variant::markov_chain_with_jumps) {
    step.jump_drawn = true;
    if (rng.uniform01() <= kind.jump_prob) {
      step.jump_fired = true;
      increment += sample_discretized_gaussian(kind.jump_dist, rng);
    }
  }
  step.price = std::clamp(price_prev + increment, lo, hi);
  return step;
}

int next_price(int price_prev, int lo, int hi, const PriceProcessKind& kind,
               const DiscretizedGaussian& noise, RngStream& rng) {
  return next_price_step(price_prev, lo, hi, kind, noise, rng).price;
}

SampledTrajectory sample_trajectory(const ProcessConfig& cfg, RngStream& rng) {
  cfg.validate();
  SampledTrajectory traj;
  traj.steps.reserve(cfg.horizon);

  ExogenousState state;
  state.energy = rng.uniform_int(cfg.energy_min, cfg.energy_max);
  state.buy_price = rng.uniform_int(cfg.buy_min, cfg.buy_max);
  state.sell_price = rng.uniform_int(cfg.sell_min, cfg.sell_max);
  state.sell_price = std::min(state.sell_price, state.buy_price);
  state.demand = next_demand(1, cfg, rng);
  traj.steps.push_back(state);

  for (int t = 2; t <= cfg.horizon; ++t) {
    ExogenousState next;
    next.demand = next_demand(t, cfg, rng);
    next.energy = next_energy(state.energy, cfg, rng);
    const PriceStep buy =
        next_price_step(state.buy_price, cfg.buy_min, cfg.buy_max,
                        cfg.price_kind, cfg.price_noise, rng);
    const PriceStep sell =
        next_price_step(state.sell_price, cfg.sell_min, cfg.sell_max,
                        cfg.price_kind, cfg.price_noise, rng);
    traj.jump_draws += buy.jump_drawn + sell.jump_drawn;
    traj.jump_fires += buy.jump_fired + sell.jump_fired;
    next.buy_price = buy.price;
    next.sell_price = std::min(sell.price, buy.price);
    traj.steps.push_back(next);
    state = next;
  }
  return traj;
}

}  // namespace snes
