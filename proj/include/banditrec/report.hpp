#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "banditrec/metrics.hpp"
#include "banditrec/replay.hpp"

namespace banditrec {

inline constexpr std::size_t kDefaultTopK = 10;

// Per-user rankings of one policy on one fold.
struct RankingSet {
  Provenance provenance;
  std::vector<UserRanking> users;
};

struct EvaluationReport {
  PolicyKind policy = PolicyKind::LinUCB;
  Provenance provenance;
  std::vector<std::string> arm_names;
  std::vector<ArmTally> arms;
  std::vector<MetricPoint> curve;  // k = 1..K
};

// Throws ContractError when the replay and rankings come from different
// folds or seeds, when K < 1, or when arm_names does not match the replay.
EvaluationReport build_report(const ReplayResult& replay, const RankingSet& rankings,
                              const std::vector<std::string>& arm_names, std::size_t max_k,
                              Exec exec = Exec::Parallel);

// policy,arm,n_matched,mean_expected_reward; tallies pooled over the folds of
// each policy. Unmatched arms leave the mean empty.
void write_report_arms(const std::filesystem::path& path, std::span<const EvaluationReport> reports);

// policy,fold,k,auc,ctr,precision,recall; undefined values are empty fields.
void write_report_metrics(const std::filesystem::path& path, std::span<const EvaluationReport> reports);

// policy,fold,user_id,rank,item_id,score,response with scores printed exactly.
// `rankings[i]` belongs to `reports[i]`.
void write_rankings(const std::filesystem::path& path, std::span<const EvaluationReport> reports,
                    std::span<const RankingSet> rankings);

struct PersistedRankings {
  std::string policy;
  std::size_t fold = 0;
  std::vector<UserRanking> users;
};

// Reads rankings.csv back; truth tables are rebuilt from the response column.
// Throws IngestionError on malformed rows.
std::vector<PersistedRankings> read_rankings(const std::filesystem::path& path);

}  // namespace banditrec
