#pragma once

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace banditrec {

inline constexpr double kVarianceFloor = 1e-8;
inline constexpr std::size_t kDefaultSelectM = 50;

struct FeatureSelection {
  std::vector<std::size_t> kept;  // ascending column indices
  std::optional<std::string> warning;
};

// Drops columns with population variance <= 1e-8, then keeps the m columns
// with largest |point-biserial correlation| with y (ties to the lower index).
// Asking for more columns than survive keeps all survivors and sets `warning`.
FeatureSelection select_features(const Eigen::MatrixXd& X, std::span<const int> y, std::size_t m);

// Point-biserial (Pearson) correlation of a column with 0/1 labels; 0 when
// either side is constant.
double point_biserial(const Eigen::Ref<const Eigen::VectorXd>& column, std::span<const int> y);

// Mean of the vectors of `item_ids`; zero vector of `dim` when the list is
// empty. Throws ReferentialError naming an item with no vector and
// ContractError on a vector of the wrong dimension.
std::vector<double> aggregate_comment_vectors(
    std::span<const std::string> item_ids,
    const std::unordered_map<std::string, std::vector<double>>& item_vecs, std::size_t dim);

}  // namespace banditrec
