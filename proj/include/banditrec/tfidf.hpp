#pragma once

#include <string>
#include <vector>

#include <Eigen/SparseCore>

namespace banditrec {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct TfidfModel {
  // Sorted lexicographically; column j of `matrix` is vocabulary[j].
  std::vector<std::string> vocabulary;
  std::vector<double> idf;
  // documents x vocabulary, nonzero rows have unit l2 norm.
  SparseMatrix matrix;
};

// tf = raw count, idf = ln((1 + N) / (1 + df)) + 1, rows l2-normalized.
// Throws ContractError on an empty corpus; empty documents give zero rows.
TfidfModel build_tfidf(const std::vector<std::vector<std::string>>& documents);

}  // namespace banditrec
