#include "banditrec/tfidf.hpp"

#include <cmath>
#include <map>

#include "banditrec/error.hpp"

namespace banditrec {

TfidfModel build_tfidf(const std::vector<std::vector<std::string>>& documents) {
  if (documents.empty()) throw ContractError("tf-idf corpus is empty");

  std::map<std::string, std::size_t> df;
  std::vector<std::map<std::string, std::size_t>> counts(documents.size());
  for (std::size_t d = 0; d < documents.size(); ++d) {
    for (const auto& tok : documents[d]) ++counts[d][tok];
    for (const auto& [tok, _] : counts[d]) ++df[tok];
  }

  TfidfModel model;
  std::map<std::string, Eigen::Index> column;
  for (const auto& [tok, n] : df) {
    column.emplace(tok, static_cast<Eigen::Index>(model.vocabulary.size()));
    model.vocabulary.push_back(tok);
    const double N = static_cast<double>(documents.size());
    model.idf.push_back(std::log((1.0 + N) / (1.0 + static_cast<double>(n))) + 1.0);
  }

  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t d = 0; d < documents.size(); ++d) {
    double norm2 = 0.0;
    const std::size_t first = triplets.size();
    for (const auto& [tok, c] : counts[d]) {
      const Eigen::Index j = column.at(tok);
      const double v = static_cast<double>(c) * model.idf[static_cast<std::size_t>(j)];
      triplets.emplace_back(static_cast<Eigen::Index>(d), j, v);
      norm2 += v * v;
    }
    if (norm2 > 0.0) {
      const double norm = std::sqrt(norm2);
      for (std::size_t t = first; t < triplets.size(); ++t) {
        const auto& tr = triplets[t];
        triplets[t] = Eigen::Triplet<double>(tr.row(), tr.col(), tr.value() / norm);
      }
    }
  }
  model.matrix.resize(static_cast<Eigen::Index>(documents.size()),
                      static_cast<Eigen::Index>(model.vocabulary.size()));
  model.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return model;
}

}  // namespace banditrec
