#pragma once

#include <array>
#include <bitset>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace banditrec {

// Eight basic emotions followed by the two sentiments, in lexicon order.
enum class Emotion : std::size_t {
  Anger,
  Fear,
  Anticipation,
  Trust,
  Surprise,
  Sadness,
  Joy,
  Disgust,
  Negative,
  Positive,
};

inline constexpr std::size_t kEmotionCount = 10;
inline constexpr std::array<std::string_view, kEmotionCount> kEmotionNames = {
    "anger", "fear",    "anticipation", "trust",    "surprise",
    "sadness", "joy",   "disgust",      "negative", "positive"};

// Ratios in [0,1]; all zero when nothing matched.
using EmotionVector = std::array<double, kEmotionCount>;

// Lowercases, drops URLs, replaces punctuation with spaces and splits on
// whitespace. Apostrophes are removed rather than split ("don't" -> "dont").
// Bytes >= 0x80 are kept so UTF-8 words survive intact.
std::vector<std::string> tokenize(std::string_view text);

// Word -> emotion/sentiment label set.
class Lexicon {
 public:
  using Labels = std::bitset<kEmotionCount>;

  // NRC-style TSV: word<TAB>label<TAB>0|1. Rows with flag 0 are accepted and
  // carry no label. Throws IngestionError with the offending line.
  static Lexicon load(const std::filesystem::path& path);

  void add(std::string word, Emotion e);
  const Labels* find(const std::string& word) const;
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_map<std::string, Labels> words_;
};

// Entry e = (#tokens carrying label e) / (#tokens carrying any label).
EmotionVector score_emotions(std::string_view text, const Lexicon& lexicon);
EmotionVector score_emotions(const std::vector<std::string>& tokens, const Lexicon& lexicon);

}  // namespace banditrec
