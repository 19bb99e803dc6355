#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "banditrec/error.hpp"
#include "banditrec/experiment.hpp"
#include "banditrec/report.hpp"
#include "banditrec/synthetic.hpp"

using namespace banditrec;
namespace fs = std::filesystem;

namespace {

struct SmallRun {
  Dataset ds;
  ExperimentResult result;

  SmallRun() {
    SyntheticConfig sc;
    sc.n_users = 30;
    sc.n_items = 40;
    sc.n_interactions = 300;
    sc.seed = 11;
    ds = generate_synthetic(sc).dataset;
    ExperimentConfig cfg;
    cfg.seed = 11;
    cfg.folds = 3;
    cfg.features.nmf_rank = 3;
    cfg.features.seed = 11;
    const auto corpus = extract_corpus_features(ds, TextResources{}, cfg.features);
    result = run_cross_validation(ds, corpus, cfg);
  }
};

const SmallRun& small_run() {
  static const SmallRun run;
  return run;
}

fs::path temp_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("banditrec_report_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

bool close(const std::optional<double>& a, const std::optional<double>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || std::abs(*a - *b) <= 1e-12;
}

}  // namespace

TEST_CASE("reports cover every policy and fold with K points") {
  const auto& run = small_run();
  REQUIRE(run.result.reports.size() == 9);
  REQUIRE(run.result.rankings.size() == 9);
  for (std::size_t i = 0; i < run.result.reports.size(); ++i) {
    const auto& r = run.result.reports[i];
    CHECK(r.curve.size() == kDefaultTopK);
    for (std::size_t k = 0; k < r.curve.size(); ++k) CHECK(r.curve[k].k == k + 1);
    CHECK(r.arms.size() == run.ds.arms.size());
    CHECK(r.provenance == run.result.rankings[i].provenance);
    CHECK(r.provenance.fold == i % 3);
  }
}

TEST_CASE("build_report rejects mixed provenance and bad K") {
  ReplayResult replay;
  replay.provenance = {0, 5};
  replay.arms.resize(2);
  RankingSet rankings;
  rankings.provenance = {1, 5};
  const std::vector<std::string> names{"A", "B"};
  CHECK_THROWS_AS(build_report(replay, rankings, names, 10), ContractError);
  rankings.provenance = {0, 6};
  CHECK_THROWS_AS(build_report(replay, rankings, names, 10), ContractError);
  rankings.provenance = {0, 5};
  CHECK_THROWS_AS(build_report(replay, rankings, names, 0), ContractError);
  CHECK_THROWS_AS(build_report(replay, rankings, {"A"}, 10), ContractError);
  const auto ok = build_report(replay, rankings, names, 4);
  CHECK(ok.curve.size() == 4);
  CHECK_FALSE(ok.curve[0].auc.has_value());
}

TEST_CASE("csv writers emit the documented headers and null fields") {
  const auto dir = temp_dir("csv");
  ReplayResult replay;
  replay.arms = {{4, 1}, {0, 0}};
  RankingSet rankings;
  UserRanking u;
  u.user_id = "u1";
  u.ranked = {{0, "i1", 0.75}, {1, "i2", 0.25}};
  u.truth = {{"i1", 0}, {"i2", 0}};
  rankings.users.push_back(u);
  const auto report = build_report(replay, rankings, {"A", "B"}, 2);
  const std::vector<EvaluationReport> reports{report};
  const std::vector<RankingSet> sets{rankings};
  write_report_arms(dir / "arms.csv", reports);
  write_report_metrics(dir / "metrics.csv", reports);
  write_rankings(dir / "rankings.csv", reports, sets);

  const auto arms = lines_of(dir / "arms.csv");
  REQUIRE(arms.size() == 3);
  CHECK(arms[0] == "policy,arm,n_matched,mean_expected_reward");
  CHECK(arms[1] == "LinUCB,A,4,0.25");
  CHECK(arms[2] == "LinUCB,B,0,");

  const auto metrics = lines_of(dir / "metrics.csv");
  REQUIRE(metrics.size() == 3);
  CHECK(metrics[0] == "policy,fold,k,auc,ctr,precision,recall");
  CHECK(metrics[1] == "LinUCB,0,1,,0,0,");
  CHECK(metrics[2] == "LinUCB,0,2,,0,0,");

  const auto ranked = lines_of(dir / "rankings.csv");
  REQUIRE(ranked.size() == 3);
  CHECK(ranked[0] == "policy,fold,user_id,rank,item_id,score,response");
  CHECK(ranked[1] == "LinUCB,0,u1,1,i1,0.75,0");
}

TEST_CASE("arm tallies are pooled over folds") {
  const auto& run = small_run();
  const auto dir = temp_dir("pooled");
  write_report_arms(dir / "arms.csv", run.result.reports);
  const auto lines = lines_of(dir / "arms.csv");
  REQUIRE(lines.size() == 1 + 3 * run.ds.arms.size());
  const auto& first = run.result.reports.front();
  std::size_t matched = 0;
  for (std::size_t f = 0; f < 3; ++f) matched += run.result.reports[f].arms[0].matched;
  const std::string prefix = std::string(to_string(first.policy)) + "," + first.arm_names[0] + "," +
                             std::to_string(matched) + ",";
  CHECK(lines[1].rfind(prefix, 0) == 0);
}

TEST_CASE("curves recomputed from persisted rankings match the report") {
  const auto& run = small_run();
  const auto dir = temp_dir("roundtrip");
  write_rankings(dir / "rankings.csv", run.result.reports, run.result.rankings);
  const auto persisted = read_rankings(dir / "rankings.csv");
  REQUIRE(persisted.size() == run.result.reports.size());
  for (std::size_t i = 0; i < persisted.size(); ++i) {
    const auto& report = run.result.reports[i];
    CHECK(persisted[i].policy == to_string(report.policy));
    CHECK(persisted[i].fold == report.provenance.fold);
    const auto curve = metric_curves(persisted[i].users, kDefaultTopK, Exec::Serial);
    for (std::size_t k = 0; k < kDefaultTopK; ++k) {
      CHECK(close(curve[k].auc, report.curve[k].auc));
      CHECK(close(curve[k].ctr, report.curve[k].ctr));
      CHECK(close(curve[k].precision, report.curve[k].precision));
      CHECK(close(curve[k].recall, report.curve[k].recall));
    }
  }
}

TEST_CASE("read_rankings rejects malformed rows") {
  const auto dir = temp_dir("malformed");
  {
    std::ofstream out(dir / "bad.csv");
    out << "policy,fold,user_id,rank,item_id,score,response\nLinUCB,0,u1,1,i1,abc,1\n";
  }
  CHECK_THROWS_AS(read_rankings(dir / "bad.csv"), IngestionError);
  {
    std::ofstream out(dir / "short.csv");
    out << "policy,fold,user_id,rank,item_id,score,response\nLinUCB,0,u1\n";
  }
  CHECK_THROWS_AS(read_rankings(dir / "short.csv"), IngestionError);
}
