#include "banditrec/empathy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "banditrec/error.hpp"

namespace banditrec {
namespace {

// Mean of in-vocabulary vectors; empty when nothing was found.
std::vector<double> mean_vector(const std::vector<std::string>& words, const Embeddings& emb) {
  std::vector<double> sum(emb.dim(), 0.0);
  std::size_t n = 0;
  for (const auto& w : words) {
    const auto* v = emb.find(w);
    if (v == nullptr) continue;
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += (*v)[i];
    ++n;
  }
  if (n == 0) return {};
  for (auto& s : sum) s /= static_cast<double>(n);
  return sum;
}

}  // namespace

Embeddings Embeddings::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError(path.string(), 0, "file", "cannot open embeddings");
  Embeddings emb;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::string word;
    if (!(ss >> word)) continue;
    std::vector<double> values;
    std::string tok;
    while (ss >> tok) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw IngestionError(path.string(), lineno, "vector", "not a number: '" + tok + "'");
      }
    }
    if (values.empty()) throw IngestionError(path.string(), lineno, "vector", "no values");
    if (emb.dim_ != 0 && values.size() != emb.dim_) {
      throw IngestionError(path.string(), lineno, "vector",
                           "dimension " + std::to_string(values.size()) + " differs from " +
                               std::to_string(emb.dim_));
    }
    emb.add(std::move(word), std::move(values));
  }
  return emb;
}

void Embeddings::add(std::string word, std::vector<double> values) {
  if (dim_ == 0) dim_ = values.size();
  if (values.size() != dim_) {
    throw IngestionError("<embeddings>", 0, word, "inconsistent embedding dimension");
  }
  table_[std::move(word)] = std::move(values);
}

const std::vector<double>* Embeddings::find(const std::string& word) const {
  auto it = table_.find(word);
  return it == table_.end() ? nullptr : &it->second;
}

std::vector<std::string> load_word_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError(path.string(), 0, "file", "cannot open word list");
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string w;
    if (ss >> w && w[0] != '#') words.push_back(w);
  }
  return words;
}

double empathy_score(const std::vector<std::string>& tokens, const Embeddings& embeddings,
                     const std::vector<std::string>& seed_words) {
  if (seed_words.empty()) throw ContractError("empathy seed word list is empty");
  const auto a = mean_vector(tokens, embeddings);
  const auto b = mean_vector(seed_words, embeddings);
  if (a.empty() || b.empty()) return 0.0;
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

}  // namespace banditrec
