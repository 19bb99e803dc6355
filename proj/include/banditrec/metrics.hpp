#pragma once

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "banditrec/parallel.hpp"
#include "banditrec/replay.hpp"

namespace banditrec {

// Held-out responses of one user: item id -> 0/1.
using Truth = std::unordered_map<std::string, int>;

// Probability that a random positive outscores a random negative, ties
// counting one half, via midranks. Empty when either class is missing.
// Throws ContractError on length mismatch or non-binary labels.
std::optional<double> compute_auc(std::span<const double> scores, std::span<const int> labels);

// Positives among recommended items found in `truth`, over how many were found.
std::optional<double> compute_ctr(std::span<const std::string> recommended, const Truth& truth);

struct PrecisionRecall {
  std::optional<double> precision;
  std::optional<double> recall;
};

// Over the first k entries of `ranked`: precision is positives over items in
// truth, recall is positives over all positives in truth.
// Throws ContractError when k < 1.
PrecisionRecall precision_recall_at_k(std::span<const std::string> ranked, const Truth& truth,
                                      std::size_t k);

struct MetricPoint {
  std::size_t k = 0;
  std::optional<double> auc;
  std::optional<double> ctr;
  std::optional<double> precision;
  std::optional<double> recall;
};

// One user's full ranking and held-out truth.
struct UserRanking {
  std::size_t user = 0;
  std::string user_id;
  std::vector<RankedItem> ranked;
  Truth truth;
};

// Metrics of one user at k = 1..K. AUC and CTR use the top-k items that are
// in the truth table.
std::vector<MetricPoint> user_metric_curve(const UserRanking& ranking, std::size_t max_k);

// Macro-average over users at each k; a point is empty when no user defines it.
// Users are evaluated independently, then reduced in input order.
std::vector<MetricPoint> metric_curves(std::span<const UserRanking> rankings, std::size_t max_k,
                                       Exec exec = Exec::Parallel);

}  // namespace banditrec
