#include <doctest.h>

#include "banditrec/error.hpp"
#include "banditrec/synthetic.hpp"

using namespace banditrec;

TEST_CASE("generation is a pure function of the config") {
  SyntheticConfig cfg;
  cfg.seed = 5;
  const auto a = generate_synthetic(cfg);
  const auto b = generate_synthetic(cfg);
  REQUIRE(a.dataset.interactions.size() == b.dataset.interactions.size());
  for (std::size_t i = 0; i < a.dataset.interactions.size(); ++i) {
    CHECK(a.dataset.interactions[i].user == b.dataset.interactions[i].user);
    CHECK(a.dataset.interactions[i].item == b.dataset.interactions[i].item);
    CHECK(a.dataset.interactions[i].response == b.dataset.interactions[i].response);
  }
  CHECK(a.truth.intercept == b.truth.intercept);
  for (std::size_t k = 0; k < a.truth.theta.size(); ++k) CHECK(a.truth.theta[k] == b.truth.theta[k]);
  cfg.seed = 6;
  CHECK(generate_synthetic(cfg).truth.intercept != a.truth.intercept);
}

TEST_CASE("dataset shape") {
  SyntheticConfig cfg;
  cfg.n_users = 30;
  cfg.n_items = 40;
  cfg.n_interactions = 500;
  cfg.n_arms = 3;
  const auto d = generate_synthetic(cfg);
  CHECK(d.dataset.users.size() == 30);
  CHECK(d.dataset.items.size() == 40);
  CHECK(d.dataset.interactions.size() == 500);
  CHECK(d.dataset.arms.size() == 3);
  CHECK(d.truth.theta.size() == 3);
  CHECK(d.truth.dim() == cfg.d_latent + cfg.d_item_latent);
  for (const auto& it : d.dataset.items) CHECK(it.strategy == d.strategy_map.lookup(it.subreddit));
  const double rate = static_cast<double>(d.dataset.positive_count()) / 500.0;
  CHECK(std::abs(rate - cfg.positive_rate_target) <= 0.02);
}

TEST_CASE("linear surface and fixed intercept") {
  SyntheticConfig cfg;
  cfg.reward_surface = RewardSurface::Linear;
  cfg.intercept = 0.5;
  const auto d = generate_synthetic(cfg);
  CHECK(d.truth.intercept == 0.5);
  Vector x = Vector::Zero(static_cast<Eigen::Index>(d.truth.dim()));
  CHECK(d.truth.probability(x, 0) == 0.5);
}

TEST_CASE("config validation") {
  SyntheticConfig cfg;
  cfg.positive_rate_target = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.n_arms = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.n_interactions = cfg.n_users * cfg.n_items + 1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("uncalibratable target raises a generation error") {
  SyntheticConfig cfg;
  cfg.n_interactions = 3;
  cfg.positive_rate_target = 0.5;
  CHECK_THROWS_AS(generate_synthetic(cfg), GenerationError);
}

TEST_CASE("online run bookkeeping") {
  SyntheticConfig cfg;
  cfg.reward_surface = RewardSurface::Linear;
  cfg.n_arms = 3;
  cfg.d_latent = 5;
  cfg.d_item_latent = 0;
  const auto d = generate_synthetic(cfg);
  PlantedEnvironment env(d.truth, 1);
  auto policy = init_policy(PolicyKind::LinUCB, 3, 5);
  Rng rng(2);
  const auto trace = run_online(policy, env, 200, rng);
  REQUIRE(trace.per_round.size() == 200);
  double sum = 0.0;
  for (double r : trace.per_round) {
    CHECK(r >= 0.0);
    sum += r;
  }
  CHECK(trace.average_at(200) == doctest::Approx(sum / 200.0));
  CHECK(policy.update_count == 200);
}
