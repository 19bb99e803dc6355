#include <doctest.h>

#include <numeric>

#include "banditrec/error.hpp"
#include "banditrec/replay.hpp"
#include "sim_fixture.hpp"

using namespace banditrec;
using banditrec::testing::SimFixture;

namespace {

SyntheticConfig small(std::size_t arms = 5) {
  SyntheticConfig cfg;
  cfg.n_users = 40;
  cfg.n_items = 60;
  cfg.n_interactions = 400;
  cfg.n_arms = arms;
  cfg.seed = 3;
  return cfg;
}

PolicyState fresh(const SimFixture& f, PolicyKind kind = PolicyKind::LinUCB) {
  return init_policy(kind, f.ds().arms.size(), f.pipeline.dim(), 1.0, 1.0, 1);
}

}  // namespace

TEST_CASE("a single arm matches every event") {
  SimFixture f(small(1));
  Rng rng(1);
  const auto r = replay_train(fresh(f), f.ds(), f.all(), f.pipeline, rng);
  CHECK(r.matched_events == r.total_events);
  CHECK(r.matched_fraction() == 1.0);
  REQUIRE(r.arms[0].mean_reward());
  CHECK(*r.arms[0].mean_reward() ==
        static_cast<double>(f.ds().positive_count()) / static_cast<double>(f.ds().interactions.size()));
}

TEST_CASE("uniform random choices match about one event in five") {
  SyntheticConfig cfg;
  cfg.n_users = 200;
  cfg.n_items = 300;
  cfg.n_interactions = 10'000;
  cfg.seed = 17;
  SimFixture f(cfg);
  Rng rng(5);
  const ArmChooser uniform = [](const PolicyState& p, std::span<const Vector>, Rng& r) {
    return static_cast<ArmId>(r.below(p.arms));
  };
  const auto r = replay_train(fresh(f), f.ds(), f.all(), f.pipeline, rng, {}, uniform);
  CHECK(r.total_events == 10'000);
  // Binomial(10000, 0.2): standard deviation 0.004, so +-0.02 is five sigma.
  CHECK(std::abs(r.matched_fraction() - 0.2) <= 0.02);
}

TEST_CASE("zero events leave the policy untouched") {
  SimFixture f(small());
  Rng rng(1);
  const auto p = fresh(f);
  const auto r = replay_train(p, f.ds(), {}, f.pipeline, rng, {2, 9});
  CHECK(r.total_events == 0);
  CHECK(r.matched_fraction() == 0.0);
  for (const auto& a : r.arms) CHECK_FALSE(a.mean_reward().has_value());
  CHECK(state_fingerprint(r.policy) == state_fingerprint(p));
  CHECK(r.provenance == Provenance{2, 9});
}

TEST_CASE("skipped events never update the policy") {
  SimFixture f(small());
  Rng rng(1);
  const auto p = fresh(f);
  const Dataset& ds = f.ds();
  const FeaturePipeline& pipe = f.pipeline;
  const ArmChooser miss = [&](const PolicyState& pol, std::span<const Vector>, Rng&) {
    return static_cast<ArmId>(pol.update_count % pol.arms);
  };
  // Replay event by event; whenever an event is skipped the fingerprint holds.
  PolicyState state = p;
  for (std::size_t idx : f.all()) {
    const std::vector<std::size_t> one{idx};
    const auto before = state_fingerprint(state);
    auto r = replay_train(state, ds, one, pipe, rng, {}, miss);
    if (r.matched_events == 0) CHECK(state_fingerprint(r.policy) == before);
    else CHECK(state_fingerprint(r.policy) != before);
    state = std::move(r.policy);
  }
}

TEST_CASE("replay is deterministic for a seed and event order") {
  SimFixture f(small());
  for (PolicyKind kind : {PolicyKind::LinTS, PolicyKind::LinUCB, PolicyKind::LogUCB}) {
    Rng a(8), b(8);
    const auto r1 = replay_train(fresh(f, kind), f.ds(), f.all(), f.pipeline, a);
    const auto r2 = replay_train(fresh(f, kind), f.ds(), f.all(), f.pipeline, b);
    CHECK(state_fingerprint(r1.policy) == state_fingerprint(r2.policy));
    CHECK(r1.matched_events == r2.matched_events);
    for (std::size_t k = 0; k < r1.arms.size(); ++k) {
      CHECK(r1.arms[k].matched == r2.arms[k].matched);
      CHECK(r1.arms[k].rewarded == r2.arms[k].rewarded);
      CHECK(r1.arms[k].matched <= r1.total_events);
    }
  }
}

TEST_CASE("replay preconditions") {
  SimFixture f(small());
  Rng rng(1);
  const std::vector<std::size_t> backwards{5, 3};
  CHECK_THROWS_AS(replay_train(fresh(f), f.ds(), backwards, f.pipeline, rng), ContractError);
  auto wrong_arms = init_policy(PolicyKind::LinUCB, 2, f.pipeline.dim());
  CHECK_THROWS_AS(replay_train(wrong_arms, f.ds(), f.all(), f.pipeline, rng), ContractError);

  Dataset broken = f.ds();
  broken.items[0].strategy = 99;
  CHECK_THROWS_AS(FeaturePipeline::fit(broken, f.corpus, f.all(), FeatureConfig{}), ReferentialError);
}

TEST_CASE("rank_items") {
  SimFixture f(small());
  const auto p = fresh(f);
  const std::vector<std::size_t> one{7};
  const auto single = rank_items(p, 0, one, 10, f.pipeline);
  REQUIRE(single.size() == 1);
  CHECK(single[0].item == 7);

  // An untrained model scores everything 0: ties fall back to item id order.
  const std::vector<std::size_t> many{9, 3, 5, 1};
  const auto tied = rank_items(p, 0, many, 3, f.pipeline);
  REQUIRE(tied.size() == 3);
  CHECK(tied[0].item_id == f.ds().items[1].id);
  CHECK(tied[1].item_id == f.ds().items[3].id);
  CHECK(tied[2].item_id == f.ds().items[5].id);

  CHECK_THROWS_AS(rank_items(p, 0, many, 0, f.pipeline), ContractError);
  CHECK_THROWS_AS(rank_items(p, 0, {}, 1, f.pipeline), ContractError);
}

TEST_CASE("greedy ranking follows the projection on theta") {
  SimFixture f(small());
  auto p = fresh(f);
  const auto d = static_cast<Eigen::Index>(f.pipeline.dim());
  // theta = e_j for every arm: the score of a candidate is its j-th coordinate.
  const Eigen::Index j = static_cast<Eigen::Index>(f.pipeline.selected_user_columns().size());
  Vector b = Vector::Zero(d);
  b(j) = 1.0;
  for (auto& m : p.models) m = LinearModel::from_parts(Matrix::Identity(d, d), Matrix::Identity(d, d), b, 0);
  std::vector<std::size_t> candidates(f.ds().items.size());
  std::iota(candidates.begin(), candidates.end(), 0);
  const auto ranked = rank_items(p, 0, candidates, candidates.size(), f.pipeline);
  for (std::size_t r = 1; r < ranked.size(); ++r) {
    const double prev = f.pipeline.assemble_context(0, ranked[r - 1].item)(j);
    const double cur = f.pipeline.assemble_context(0, ranked[r].item)(j);
    CHECK(prev >= cur);
    CHECK(ranked[r].score == cur);
  }
}

TEST_CASE("LinTS ranking uses the posterior mean") {
  SimFixture f(small());
  Rng rng(4);
  const auto trained = replay_train(fresh(f, PolicyKind::LinTS), f.ds(), f.all(), f.pipeline, rng);
  const std::vector<std::size_t> candidates{0, 1, 2, 3};
  const auto a = rank_items(trained.policy, 2, candidates, 4, f.pipeline);
  for (const auto& item : a) {
    const auto& model = trained.policy.model_for(f.pipeline.item_strategy(item.item));
    CHECK(item.score == model.theta().dot(f.pipeline.assemble_context(2, item.item)));
  }
}
