#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

namespace banditrec {

// Pretrained word vectors from a text table, one "word v1 ... vD" per line.
class Embeddings {
 public:
  Embeddings() = default;
  // Throws IngestionError when rows disagree on dimension or hold non-numbers.
  static Embeddings load(const std::filesystem::path& path);

  // Throws IngestionError on a dimension different from earlier entries.
  void add(std::string word, std::vector<double> values);

  const std::vector<double>* find(const std::string& word) const;
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return table_.size(); }

 private:
  std::size_t dim_ = 0;
  std::unordered_map<std::string, std::vector<double>> table_;
};

// One seed word per line; blank lines and '#' comments skipped.
std::vector<std::string> load_word_list(const std::filesystem::path& path);

// Cosine between the mean in-vocabulary token vector and the mean
// in-vocabulary seed vector; 0 when either side has no vector or zero norm.
// Throws ContractError on an empty seed list.
double empathy_score(const std::vector<std::string>& tokens, const Embeddings& embeddings,
                     const std::vector<std::string>& seed_words);

}  // namespace banditrec
