#include "banditrec/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "banditrec/error.hpp"

namespace banditrec {

double point_biserial(const Eigen::Ref<const Eigen::VectorXd>& column, std::span<const int> y) {
  const auto n = static_cast<double>(y.size());
  if (y.empty()) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    mx += column(static_cast<Eigen::Index>(i));
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double dx = column(static_cast<Eigen::Index>(i)) - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

FeatureSelection select_features(const Eigen::MatrixXd& X, std::span<const int> y,
                                 std::size_t m) {
  if (static_cast<std::size_t>(X.rows()) != y.size()) {
    throw ContractError("feature matrix has " + std::to_string(X.rows()) + " rows but " +
                        std::to_string(y.size()) + " labels");
  }
  if (m == 0) throw ContractError("must select at least one feature");
  for (int v : y) {
    if (v != 0 && v != 1) throw ContractError("labels must be 0 or 1");
  }

  struct Scored {
    std::size_t col;
    double strength;
  };
  std::vector<Scored> survivors;
  const double n = static_cast<double>(X.rows());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    if (X.rows() == 0) break;
    const double mean = X.col(j).sum() / n;
    const double var = (X.col(j).array() - mean).square().sum() / n;
    if (var <= kVarianceFloor) continue;
    survivors.push_back({static_cast<std::size_t>(j), std::abs(point_biserial(X.col(j), y))});
  }

  FeatureSelection out;
  if (m > survivors.size()) {
    out.warning = "requested " + std::to_string(m) + " features but only " +
                  std::to_string(survivors.size()) + " have nonzero variance; keeping all";
  }
  std::stable_sort(survivors.begin(), survivors.end(),
                   [](const Scored& a, const Scored& b) { return a.strength > b.strength; });
  for (std::size_t i = 0; i < survivors.size() && i < m; ++i) out.kept.push_back(survivors[i].col);
  std::sort(out.kept.begin(), out.kept.end());
  return out;
}

std::vector<double> aggregate_comment_vectors(
    std::span<const std::string> item_ids,
    const std::unordered_map<std::string, std::vector<double>>& item_vecs, std::size_t dim) {
  std::vector<double> sum(dim, 0.0);
  for (const auto& id : item_ids) {
    auto it = item_vecs.find(id);
    if (it == item_vecs.end()) throw ReferentialError("no vector for item '" + id + "'");
    if (it->second.size() != dim) {
      throw ContractError("vector for item '" + id + "' has dimension " +
                          std::to_string(it->second.size()) + ", expected " + std::to_string(dim));
    }
    for (std::size_t k = 0; k < dim; ++k) sum[k] += it->second[k];
  }
  if (!item_ids.empty()) {
    for (auto& v : sum) v /= static_cast<double>(item_ids.size());
  }
  return sum;
}

}  // namespace banditrec
