#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace banditrec {

class Dataset;

struct FoldSplit {
  std::size_t k = 0;
  // fold_of[i] is the fold of interaction i.
  std::vector<std::size_t> fold_of;

  // Interaction indices in ascending (hence time) order.
  std::vector<std::size_t> test_indices(std::size_t fold) const;
  std::vector<std::size_t> train_indices(std::size_t fold) const;
};

// Stratified by response: positives and negatives are shuffled separately and
// dealt round-robin, negatives continuing where the positives stopped, so
// fold sizes differ by at most one and per-fold positive counts by at most one.
// Throws ContractError when k < 2 or k exceeds the number of interactions.
FoldSplit split_folds(std::span<const int> responses, std::size_t k, std::uint64_t seed);
FoldSplit split_folds(const Dataset& ds, std::size_t k, std::uint64_t seed);

}  // namespace banditrec
