#include "banditrec/folds.hpp"

#include <string>

#include "banditrec/dataset.hpp"
#include "banditrec/error.hpp"
#include "banditrec/rng.hpp"

namespace banditrec {

std::vector<std::size_t> FoldSplit::test_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldSplit::train_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] != fold) out.push_back(i);
  }
  return out;
}

FoldSplit split_folds(std::span<const int> responses, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ContractError("fold count must be at least 2");
  if (k > responses.size()) {
    throw ContractError("fold count " + std::to_string(k) + " exceeds " +
                        std::to_string(responses.size()) + " interactions");
  }
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < responses.size(); ++i) {
    (responses[i] == 1 ? pos : neg).push_back(i);
  }
  Rng rng(seed);
  rng.shuffle(std::span(pos));
  rng.shuffle(std::span(neg));

  FoldSplit split;
  split.k = k;
  split.fold_of.assign(responses.size(), 0);
  std::size_t next = 0;
  for (std::size_t i : pos) split.fold_of[i] = next++ % k;
  for (std::size_t i : neg) split.fold_of[i] = next++ % k;
  return split;
}

FoldSplit split_folds(const Dataset& ds, std::size_t k, std::uint64_t seed) {
  std::vector<int> responses;
  responses.reserve(ds.interactions.size());
  for (const auto& it : ds.interactions) responses.push_back(it.response);
  return split_folds(responses, k, seed);
}

}  // namespace banditrec
