#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "banditrec/bandit.hpp"
#include "banditrec/dataset.hpp"
#include "banditrec/strategy_map.hpp"

namespace banditrec {

enum class RewardSurface { Linear, Sigmoid };

std::string_view to_string(RewardSurface s);
RewardSurface parse_reward_surface(std::string_view name);

struct SyntheticConfig {
  std::size_t n_users = 100;
  std::size_t n_items = 200;
  std::size_t n_interactions = 1000;
  // Latent dimensions of users and items; the generating context is
  // [user latent | item latent].
  std::size_t d_latent = 4;
  std::size_t d_item_latent = 4;
  double positive_rate_target = 0.36;
  RewardSurface reward_surface = RewardSurface::Sigmoid;
  std::uint64_t seed = 42;
  std::size_t n_arms = 5;
  std::size_t n_subreddits = 12;
  // Sigmoid: p = sigmoid(logit_scale * x.theta + c).
  double logit_scale = 1.5;
  // Linear: p = clamp01(c + linear_slope * x.theta).
  double linear_slope = 0.15;
  // Arm parameters are sqrt(1 - s^2) * common + s * arm-specific.
  double arm_spread = 0.5;
  // When set, c is fixed instead of calibrated to positive_rate_target.
  std::optional<double> intercept;

  // Throws ConfigError on an invalid field.
  void validate() const;
};

// Hidden reward model behind a synthetic dataset.
struct SyntheticTruth {
  RewardSurface surface = RewardSurface::Sigmoid;
  std::vector<Vector> theta;  // one per arm, unit-scale entries ~ N(0, 1/dim)
  double scale = 1.0;
  double intercept = 0.0;

  std::size_t dim() const { return theta.empty() ? 0 : static_cast<std::size_t>(theta[0].size()); }
  double probability(const Vector& x, ArmId arm) const;
  ArmId best_arm(const Vector& x) const;
  // [user latent | item latent].
  Vector generating_context(const UserRecord& user, const ItemRecord& item) const;
};

struct SyntheticData {
  Dataset dataset;
  SyntheticTruth truth;
  StrategyMap strategy_map;
};

// Pure function of the config. Users and items get standard-normal latents and
// categorical subreddits; subreddit j maps to arm j mod n_arms; responses are
// Bernoulli with the intercept bisected so the empirical positive rate lands
// within 0.02 of the target. Throws GenerationError when calibration fails.
SyntheticData generate_synthetic(const SyntheticConfig& cfg);

// Online environment over the hidden truth: each round draws a fresh
// standard-normal context shared by all arms.
class PlantedEnvironment {
 public:
  PlantedEnvironment(SyntheticTruth truth, std::uint64_t seed);

  Vector next_context();
  int draw_reward(const Vector& x, ArmId arm);
  const SyntheticTruth& truth() const { return truth_; }

 private:
  SyntheticTruth truth_;
  Rng rng_;
};

struct RegretTrace {
  // Expected (pseudo-)regret of each round: p_best - p_chosen.
  std::vector<double> per_round;

  // Cumulative regret divided by t at round t (1-based).
  double average_at(std::size_t t) const;
  double mean_over(std::size_t first, std::size_t last) const;
};

// Runs `policy` online for `rounds` rounds, updating it with observed rewards.
RegretTrace run_online(PolicyState& policy, PlantedEnvironment& env, std::size_t rounds, Rng& rng);

}  // namespace banditrec
