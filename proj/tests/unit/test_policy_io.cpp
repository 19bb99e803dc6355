#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "banditrec/error.hpp"
#include "banditrec/policy_io.hpp"
#include "banditrec/rng.hpp"

using namespace banditrec;

TEST_CASE("policy state survives a save/load round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "banditrec_policy_io";
  std::filesystem::create_directories(dir);
  for (PolicyKind kind : {PolicyKind::LinTS, PolicyKind::LinUCB, PolicyKind::LogUCB}) {
    Rng rng(4);
    auto p = init_policy(kind, 3, 4, 0.7, 1.5, 21);
    for (int t = 0; t < 40; ++t) {
      Vector x(4);
      for (int i = 0; i < 4; ++i) x(i) = rng.normal();
      update(p, rng.below(3), x, rng.bernoulli(0.5) ? 1 : 0);
    }
    const auto path = dir / "p.json";
    save_policy(p, path);
    const auto q = load_policy(path);
    CHECK(state_fingerprint(p) == state_fingerprint(q));
    CHECK(q.kind == kind);
    CHECK(q.alpha == 0.7);
    CHECK(q.lambda == 1.5);
    CHECK(q.models[0].sampling_factor().has_value() == (kind == PolicyKind::LinTS));

    Vector x = Vector::Ones(4);
    Rng a(9), b(9);
    for (ArmId arm = 0; arm < 3; ++arm) CHECK(score_arm(p, arm, x, a) == score_arm(q, arm, x, b));
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("bad policy files") {
  CHECK_THROWS_AS(load_policy("/nonexistent/policy.json"), StateError);
  const auto path = std::filesystem::temp_directory_path() / "banditrec_bad_policy.json";
  {
    std::ofstream(path) << "{\"format\": \"something-else\"}";
  }
  CHECK_THROWS_AS(load_policy(path), StateError);
  {
    std::ofstream(path) << "not json";
  }
  CHECK_THROWS_AS(load_policy(path), StateError);
  std::filesystem::remove(path);
}
