#include <doctest.h>

#include <algorithm>
#include <set>

#include "banditrec/error.hpp"
#include "banditrec/folds.hpp"
#include "banditrec/rng.hpp"

using namespace banditrec;

namespace {

void check_stratified(const std::vector<int>& y, const FoldSplit& s) {
  std::vector<std::size_t> sizes(s.k), pos(s.k);
  for (std::size_t i = 0; i < y.size(); ++i) {
    REQUIRE(s.fold_of[i] < s.k);
    ++sizes[s.fold_of[i]];
    pos[s.fold_of[i]] += static_cast<std::size_t>(y[i]);
  }
  CHECK(*std::max_element(sizes.begin(), sizes.end()) - *std::min_element(sizes.begin(), sizes.end()) <= 1);
  CHECK(*std::max_element(pos.begin(), pos.end()) - *std::min_element(pos.begin(), pos.end()) <= 1);
  for (std::size_t f = 0; f < s.k; ++f) {
    const auto test = s.test_indices(f);
    const auto train = s.train_indices(f);
    CHECK(test.size() + train.size() == y.size());
    CHECK(std::is_sorted(test.begin(), test.end()));
    std::set<std::size_t> all(test.begin(), test.end());
    all.insert(train.begin(), train.end());
    CHECK(all.size() == y.size());
  }
}

}  // namespace

TEST_CASE("100 interactions with 36 positives in 5 folds") {
  std::vector<int> y(100, 0);
  std::fill(y.begin(), y.begin() + 36, 1);
  const auto s = split_folds(y, 5, 42);
  for (std::size_t f = 0; f < 5; ++f) {
    const auto test = s.test_indices(f);
    CHECK(test.size() == 20);
    std::size_t p = 0;
    for (auto i : test) p += static_cast<std::size_t>(y[i]);
    CHECK((p == 7 || p == 8));
  }
  check_stratified(y, s);
}

TEST_CASE("stratification holds on random inputs") {
  Rng rng(9);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 10 + rng.below(300);
    std::vector<int> y(n);
    for (auto& v : y) v = rng.bernoulli(rng.uniform()) ? 1 : 0;
    const std::size_t k = 2 + rng.below(9);
    check_stratified(y, split_folds(y, k, rng.next()));
  }
}

TEST_CASE("folds are seeded") {
  std::vector<int> y(50);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = i % 3 == 0;
  CHECK(split_folds(y, 4, 1).fold_of == split_folds(y, 4, 1).fold_of);
  CHECK(split_folds(y, 4, 1).fold_of != split_folds(y, 4, 2).fold_of);
}

TEST_CASE("fold count limits") {
  std::vector<int> y{0, 1, 0};
  CHECK_THROWS_AS(split_folds(y, 1, 0), ContractError);
  CHECK_THROWS_AS(split_folds(y, 4, 0), ContractError);
  CHECK_NOTHROW(split_folds(y, 3, 0));
}
