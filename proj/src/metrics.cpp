#include "banditrec/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "banditrec/error.hpp"

namespace banditrec {

std::optional<double> compute_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw ContractError("scores and labels differ in length");
  const std::size_t n = scores.size();
  std::size_t positives = 0;
  for (int l : labels) {
    if (l != 0 && l != 1) throw ContractError("labels must be 0 or 1");
    positives += static_cast<std::size_t>(l);
  }
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) return std::nullopt;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Twice the rank sum keeps midranks integral.
  std::size_t twice_rank_sum = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const std::size_t twice_midrank = i + 1 + j;
    for (std::size_t t = i; t < j; ++t) {
      if (labels[order[t]] == 1) twice_rank_sum += twice_midrank;
    }
    i = j;
  }
  const double u = static_cast<double>(twice_rank_sum) / 2.0 -
                   static_cast<double>(positives) * static_cast<double>(positives + 1) / 2.0;
  return u / (static_cast<double>(positives) * static_cast<double>(negatives));
}

std::optional<double> compute_ctr(std::span<const std::string> recommended, const Truth& truth) {
  std::size_t found = 0, clicked = 0;
  for (const auto& id : recommended) {
    auto it = truth.find(id);
    if (it == truth.end()) continue;
    ++found;
    clicked += it->second == 1 ? 1 : 0;
  }
  if (found == 0) return std::nullopt;
  return static_cast<double>(clicked) / static_cast<double>(found);
}

PrecisionRecall precision_recall_at_k(std::span<const std::string> ranked, const Truth& truth,
                                      std::size_t k) {
  if (k < 1) throw ContractError("k must be at least 1");
  std::size_t total_positive = 0;
  for (const auto& [id, r] : truth) total_positive += r == 1 ? 1 : 0;
  std::size_t found = 0, hits = 0;
  for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i) {
    auto it = truth.find(ranked[i]);
    if (it == truth.end()) continue;
    ++found;
    hits += it->second == 1 ? 1 : 0;
  }
  PrecisionRecall out;
  if (found > 0) out.precision = static_cast<double>(hits) / static_cast<double>(found);
  if (total_positive > 0) out.recall = static_cast<double>(hits) / static_cast<double>(total_positive);
  return out;
}

std::vector<MetricPoint> user_metric_curve(const UserRanking& ranking, std::size_t max_k) {
  std::vector<std::string> ids;
  for (const auto& r : ranking.ranked) ids.push_back(r.item_id);
  std::vector<MetricPoint> curve;
  for (std::size_t k = 1; k <= max_k; ++k) {
    MetricPoint p;
    p.k = k;
    const std::size_t top = std::min(k, ids.size());
    std::span<const std::string> head(ids.data(), top);
    std::vector<double> scores;
    std::vector<int> labels;
    for (std::size_t i = 0; i < top; ++i) {
      auto it = ranking.truth.find(ids[i]);
      if (it == ranking.truth.end()) continue;
      scores.push_back(ranking.ranked[i].score);
      labels.push_back(it->second);
    }
    p.auc = compute_auc(scores, labels);
    p.ctr = compute_ctr(head, ranking.truth);
    const auto pr = precision_recall_at_k(ids, ranking.truth, k);
    p.precision = pr.precision;
    p.recall = pr.recall;
    curve.push_back(p);
  }
  return curve;
}

std::vector<MetricPoint> metric_curves(std::span<const UserRanking> rankings, std::size_t max_k, Exec exec) {
  std::vector<std::vector<MetricPoint>> per_user(rankings.size());
  const auto n = static_cast<std::ptrdiff_t>(rankings.size());
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static) num_threads(worker_count())
    for (std::ptrdiff_t u = 0; u < n; ++u) per_user[u] = user_metric_curve(rankings[u], max_k);
  } else {
    for (std::ptrdiff_t u = 0; u < n; ++u) per_user[u] = user_metric_curve(rankings[u], max_k);
  }

  struct Mean {
    double sum = 0.0;
    std::size_t n = 0;
    void add(const std::optional<double>& v) {
      if (v) {
        sum += *v;
        ++n;
      }
    }
    std::optional<double> value() const {
      if (n == 0) return std::nullopt;
      return sum / static_cast<double>(n);
    }
  };
  std::vector<MetricPoint> out;
  for (std::size_t k = 1; k <= max_k; ++k) {
    Mean auc, ctr, precision, recall;
    for (const auto& curve : per_user) {
      const auto& p = curve[k - 1];
      auc.add(p.auc);
      ctr.add(p.ctr);
      precision.add(p.precision);
      recall.add(p.recall);
    }
    out.push_back({k, auc.value(), ctr.value(), precision.value(), recall.value()});
  }
  return out;
}

}  // namespace banditrec
