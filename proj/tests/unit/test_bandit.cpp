#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Cholesky>

#include "banditrec/bandit.hpp"
#include "banditrec/error.hpp"
#include "banditrec/rng.hpp"

using namespace banditrec;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Vector random_vector(Rng& rng, std::size_t d) {
  Vector x(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.normal();
  return x;
}

}  // namespace

TEST_CASE("init_policy shapes and priors") {
  const auto ucb = init_policy(PolicyKind::LinUCB, 5, 3, 1.0, 1.0, 7);
  REQUIRE(ucb.models.size() == 5);
  for (const auto& m : ucb.models) {
    CHECK(m.design().isApprox(Matrix::Identity(3, 3)));
    CHECK(m.rewards().isZero());
    CHECK(m.theta().isZero());
  }

  const auto log = init_policy(PolicyKind::LogUCB, 5, 3, 1.0, 2.0, 7);
  REQUIRE(log.models.size() == 1);
  CHECK(log.models[0].design() == 2.0 * Matrix::Identity(3, 3));

  const auto ts = init_policy(PolicyKind::LinTS, 4, 3, 1.0, 3.0, 7);
  CHECK(ts.models.size() == 4);
  CHECK(ts.models[0].design() == 3.0 * Matrix::Identity(3, 3));
  CHECK(ts.models[0].sampling_factor().has_value());

  CHECK_THROWS_AS(init_policy(PolicyKind::LinTS, 5, 3, 1.0, 0.0, 7), ConfigError);
  CHECK_THROWS_AS(init_policy(PolicyKind::LinUCB, 5, 0, 1.0, 1.0, 7), ConfigError);
  CHECK_THROWS_AS(init_policy(PolicyKind::LinUCB, 0, 3, 1.0, 1.0, 7), ConfigError);
  CHECK_THROWS_AS(init_policy(PolicyKind::LinUCB, 5, 3, -1.0, 1.0, 7), ConfigError);
}

TEST_CASE("LinUCB ignores lambda and starts from the identity") {
  const auto ucb = init_policy(PolicyKind::LinUCB, 2, 2, 1.0, 5.0, 0);
  CHECK(ucb.models[0].design() == Matrix::Identity(2, 2));
}

TEST_CASE("linucb_score worked values") {
  LinearModel m(2, 1.0);
  CHECK(linucb_score(m, vec({1, 0}), 1.0) == doctest::Approx(1.0));
  CHECK(linucb_score(m, vec({1, 0}), 0.0) == 0.0);
  m.update(vec({1, 0}), 1.0);
  // A = diag(2, 1): theta = (1/2, 0), x^T A^-1 x = 1/2.
  CHECK(linucb_score(m, vec({1, 0}), 1.0) == doctest::Approx(0.5 + std::sqrt(0.5)).epsilon(1e-12));
  CHECK_THROWS_AS(linucb_score(m, vec({1, 0, 0}), 1.0), ContractError);
  CHECK_THROWS_AS(linucb_score(m, vec({std::nan(""), 0}), 1.0), ContractError);
}

TEST_CASE("logucb_score worked values") {
  LinearModel m(2, 1.0);
  CHECK(logucb_score(m, vec({0, 1}), 2.0) == doctest::Approx(2.0));
  CHECK(logucb_score(m, vec({0, 1}), 0.0) == 0.0);
  auto built = LinearModel::from_parts(vec({2, 1}).asDiagonal(), vec({0.5, 1}).asDiagonal(), vec({1, 0}), 1);
  CHECK(logucb_score(built, vec({1, 0}), 1.0) == doctest::Approx(0.5 + std::sqrt(0.5)).epsilon(1e-12));
  CHECK(predicted_probability(built, vec({1, 0})) == doctest::Approx(1.0 / (1.0 + std::exp(-0.5))));
}

TEST_CASE("lints_score") {
  LinearModel prior(3, 1.0);
  prior.enable_sampling_factor();
  CHECK(lints_score(prior, vec({0.3, -2, 5}), Vector::Zero(3)) == 0.0);

  auto m = LinearModel::from_parts(Matrix::Identity(2, 2), Matrix::Identity(2, 2), vec({1, 0}), 0);
  m.enable_sampling_factor();
  Rng a(99), b(99);
  CHECK(lints_score(m, vec({1, 0}), a) == lints_score(m, vec({1, 0}), b));

  // Score ~ N(1, 1): the sample mean of n draws has standard error 1/sqrt(n).
  Rng rng(5);
  const int n = 10'000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += lints_score(m, vec({1, 0}), rng);
  CHECK(std::abs(sum / n - 1.0) < 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("select_arm") {
  Rng rng(1);
  auto fresh = init_policy(PolicyKind::LinUCB, 3, 2);
  std::vector<Vector> zeros(3, Vector::Zero(2));
  CHECK(select_arm(fresh, zeros, rng) == 0);

  auto p = init_policy(PolicyKind::LinUCB, 3, 2, 0.0);
  update(p, 1, vec({1, 0}), 1);
  std::vector<Vector> same(3, vec({1, 0}));
  CHECK(select_arm(p, same, rng) == 1);
  for (double c : {0.01, 3.0, 1e6}) {
    std::vector<Vector> scaled(3, c * vec({1, 0}));
    CHECK(select_arm(p, scaled, rng) == 1);
  }

  std::vector<Vector> two(2, vec({1, 0}));
  CHECK_THROWS_AS(select_arm(p, two, rng), ContractError);
}

TEST_CASE("update") {
  auto p = init_policy(PolicyKind::LinUCB, 2, 2);
  update(p, 0, vec({1, 0}), 1);
  const auto& m = p.models[0];
  CHECK(m.design() == Matrix(vec({2, 1}).asDiagonal()));
  CHECK(m.rewards() == vec({1, 0}));
  CHECK(m.theta().isApprox(vec({0.5, 0})));
  CHECK(p.models[1].update_count() == 0);

  update(p, 0, vec({0, 1}), 0);
  CHECK(p.models[0].rewards() == vec({1, 0}));
  CHECK(p.models[0].design() == Matrix(vec({2, 2}).asDiagonal()));
  CHECK_THROWS_AS(update(p, 0, vec({0, 1}), 2), ContractError);
  CHECK_THROWS_AS(update(p, 0, vec({0, 1}), -1), ContractError);

  auto log = init_policy(PolicyKind::LogUCB, 3, 2);
  update(log, 2, vec({1, 1}), 1);
  CHECK(log.models[0].update_count() == 1);
}

TEST_CASE("maintained inverse tracks direct inversion") {
  Rng rng(2024);
  const std::size_t d = 20;
  LinearModel m(d, 1.0);
  for (int t = 0; t < 1000; ++t) m.update(random_vector(rng, d), rng.bernoulli(0.4) ? 1.0 : 0.0);
  const Matrix direct = m.design().inverse();
  CHECK((m.inverse() - direct).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((m.design() * m.theta() - m.rewards()).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(Eigen::LLT<Matrix>(m.design()).info() == Eigen::Success);
}

TEST_CASE("inverse is refreshed on schedule") {
  Rng rng(3);
  LinearModel m(2, 1.0);
  for (std::uint64_t t = 0; t + 1 < LinearModel::kRefreshInterval; ++t) m.update(random_vector(rng, 2), 1.0);
  m.update(random_vector(rng, 2), 1.0);
  LinearModel fresh = m;
  fresh.refresh_inverse();
  CHECK(m.inverse() == fresh.inverse());
  m.update(random_vector(rng, 2), 1.0);
  fresh = m;
  fresh.refresh_inverse();
  CHECK(m.inverse() != fresh.inverse());
}

TEST_CASE("policy invariants under random updates") {
  Rng rng(11);
  const std::size_t d = 6;
  for (PolicyKind kind : {PolicyKind::LinTS, PolicyKind::LinUCB, PolicyKind::LogUCB}) {
    auto p = init_policy(kind, 3, d, 1.0, 1.0, 5);
    for (int t = 0; t < 200; ++t) {
      const ArmId arm = rng.below(3);
      const Vector x = random_vector(rng, d);
      const auto& model = p.model_for(arm);
      const double before = model.variance(x);
      update(p, arm, x, rng.bernoulli(0.5) ? 1 : 0);
      CHECK(p.model_for(arm).variance(x) < before);
      for (const auto& m : p.models) {
        CHECK((m.design() * m.theta() - m.rewards()).cwiseAbs().maxCoeff() < 1e-8);
      }
    }
    for (int t = 0; t < 50; ++t) {
      const Vector x = random_vector(rng, d);
      for (const auto& m : p.models) CHECK(m.variance(x) >= 0.0);
    }
  }
}

TEST_CASE("scores are nondecreasing in alpha and reduce to the greedy term") {
  Rng rng(8);
  LinearModel m(4, 1.0);
  for (int t = 0; t < 30; ++t) m.update(random_vector(rng, 4), rng.bernoulli(0.5) ? 1.0 : 0.0);
  for (int t = 0; t < 20; ++t) {
    const Vector x = random_vector(rng, 4);
    CHECK(linucb_score(m, x, 0.0) == m.theta().dot(x));
    double prev = -std::numeric_limits<double>::infinity();
    for (double a : {0.0, 0.1, 0.5, 1.0, 2.0, 10.0}) {
      const double s = linucb_score(m, x, a);
      CHECK(s >= prev);
      CHECK(logucb_score(m, x, a) == s);
      prev = s;
    }
  }
}

TEST_CASE("identical seeds and events give identical states") {
  for (PolicyKind kind : {PolicyKind::LinTS, PolicyKind::LinUCB, PolicyKind::LogUCB}) {
    auto run = [&] {
      Rng rng(77);
      Rng data(3);
      auto p = init_policy(kind, 4, 5, 1.0, 1.0, 77);
      for (int t = 0; t < 300; ++t) {
        std::vector<Vector> ctx;
        for (int a = 0; a < 4; ++a) ctx.push_back(random_vector(data, 5));
        const ArmId arm = select_arm(p, ctx, rng);
        update(p, arm, ctx[arm], data.bernoulli(0.3) ? 1 : 0);
      }
      return state_fingerprint(p);
    };
    CHECK(run() == run());
  }
}

TEST_CASE("policy kind names") {
  CHECK(parse_policy_kind("linucb") == PolicyKind::LinUCB);
  CHECK(parse_policy_kind("LinTS") == PolicyKind::LinTS);
  CHECK(to_string(PolicyKind::LogUCB) == "LogUCB");
  CHECK_THROWS_AS(parse_policy_kind("egreedy"), ConfigError);
}
