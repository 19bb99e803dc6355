#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "banditrec/cli.hpp"

using namespace banditrec;
namespace fs = std::filesystem;

namespace {

const fs::path kSource = BANDITREC_SOURCE_DIR;

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Outcome o;
  o.code = run_command(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

fs::path fresh(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("banditrec_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

const std::string kSmallSim[] = {"--set", "synthetic.n_users=40", "--set", "synthetic.n_items=60",
                                 "--set", "synthetic.n_interactions=400", "--folds", "3"};

std::vector<std::string> simulate_args(const fs::path& out) {
  std::vector<std::string> args{"simulate", "--config", (kSource / "configs" / "default.cfg").string(), "--out",
                                out.string()};
  args.insert(args.end(), std::begin(kSmallSim), std::end(kSmallSim));
  return args;
}

}  // namespace

TEST_CASE("simulate writes reports, rankings and plots deterministically") {
  const auto a = fresh("sim_a");
  const auto b = fresh("sim_b");
  auto args_b = simulate_args(b);
  args_b.push_back("--jobs");
  args_b.push_back("3");
  const auto first = run(simulate_args(a));
  REQUIRE_MESSAGE(first.code == kExitOk, first.err);
  REQUIRE(run(args_b).code == kExitOk);
  CHECK(line_count(a / "report_metrics.csv") == 1 + 3 * 3 * 10);
  CHECK(line_count(a / "report_arms.csv") == 1 + 3 * 5);
  for (const char* name : {"report_metrics.csv", "report_arms.csv", "rankings.csv", "expected_rewards.svg",
                           "metric_auc.svg", "metric_ctr.svg", "metric_precision.svg", "metric_recall.svg",
                           "synthetic_truth.json"}) {
    REQUIRE(fs::exists(a / name));
    CHECK_MESSAGE(slurp(a / name) == slurp(b / name), name);
  }
}

TEST_CASE("fixture corpus runs through every subcommand") {
  const auto out = fresh("chain");
  const auto cfg = (kSource / "tests" / "fixtures" / "fixture.cfg").string();
  const std::vector<std::string> base{"--config", cfg, "--out", out.string()};
  auto with = [&](std::string cmd, std::vector<std::string> extra = {}) {
    std::vector<std::string> args{std::move(cmd)};
    args.insert(args.end(), base.begin(), base.end());
    args.insert(args.end(), extra.begin(), extra.end());
    return run(args);
  };
  REQUIRE_MESSAGE(with("ingest").code == kExitOk, with("ingest").err);
  CHECK(fs::exists(out / "dataset"));
  REQUIRE(with("featurize").code == kExitOk);
  CHECK(fs::exists(out / "pipeline" / "manifest.json"));
  REQUIRE(with("train").code == kExitOk);
  CHECK(fs::exists(out / "policy_LinUCB.json"));

  const auto rec = with("recommend", {"--user", "alice", "--k", "2", "--policy", "LinUCB"});
  REQUIRE_MESSAGE(rec.code == kExitOk, rec.err);
  CHECK(rec.out.rfind("rank,item_id,strategy,score\n", 0) == 0);
  CHECK(std::count(rec.out.begin(), rec.out.end(), '\n') == 3);

  const auto missing = with("recommend", {"--user", "nobody"});
  CHECK(missing.code == kExitRuntime);
  CHECK(missing.err.find("unknown user 'nobody'") != std::string::npos);

  REQUIRE(with("evaluate").code == kExitOk);
  CHECK(line_count(out / "report_metrics.csv") == 1 + 3 * 2 * 3);
  CHECK(fs::exists(out / "metric_recall.svg"));
}

TEST_CASE("invalid configuration exits 1 before writing anything") {
  const auto out = fresh("invalid");
  auto args = simulate_args(out);
  args.push_back("--set");
  args.push_back("policy.lambda=0");
  const auto r = run(args);
  CHECK(r.code == kExitInvalid);
  CHECK(r.err.find("policy.lambda") != std::string::npos);
  CHECK_FALSE(fs::exists(out));

  auto unknown = simulate_args(out);
  unknown.push_back("--set");
  unknown.push_back("policy.colour=red");
  CHECK(run(unknown).code == kExitInvalid);
  CHECK_FALSE(fs::exists(out));

  CHECK(run({"simulate"}).code == kExitInvalid);
  CHECK(run({"frobnicate", "--out", out.string()}).code == kExitInvalid);
}

TEST_CASE("missing artifacts exit 2") {
  const auto out = fresh("empty");
  const auto r = run({"featurize", "--out", out.string()});
  CHECK(r.code == kExitRuntime);
  CHECK(r.err.find("run ingest or simulate first") != std::string::npos);
  CHECK(run({"recommend", "--out", out.string(), "--user", "alice"}).code == kExitRuntime);
}

TEST_CASE("malformed input files exit 1") {
  const auto dir = fresh("bad_input");
  fs::create_directories(dir);
  std::ofstream(dir / "users.csv") << "user_id,karma,subreddits\nu1,notanumber,a\n";
  std::ofstream(dir / "posts.jsonl") << "";
  std::ofstream(dir / "interactions.csv") << "user_id,item_id,response,timestamp\n";
  const auto r = run({"ingest", "--out", (dir / "out").string(), "--users", (dir / "users.csv").string(), "--posts",
                      (dir / "posts.jsonl").string(), "--interactions", (dir / "interactions.csv").string()});
  CHECK(r.code == kExitInvalid);
  CHECK(r.err.find("karma") != std::string::npos);
}
