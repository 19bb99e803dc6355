#include "banditrec/text.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "banditrec/error.hpp"

namespace banditrec {
namespace {

bool is_url(std::string_view w) {
  return w.starts_with("http://") || w.starts_with("https://") || w.starts_with("www.");
}

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c >= 0x80;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    std::string word;
    for (std::size_t k = i; k < j; ++k) {
      const auto c = static_cast<unsigned char>(text[k]);
      word.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c));
    }
    i = j;
    if (word.empty() || is_url(word)) continue;
    for (unsigned char c : word) {
      if (c == '\'') continue;
      if (is_word_byte(c)) {
        current.push_back(static_cast<char>(c));
      } else if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
    }
    if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  return tokens;
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError(path.string(), 0, "file", "cannot open lexicon");
  Lexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, '\t')) cols.push_back(col);
    if (cols.size() != 3) {
      throw IngestionError(path.string(), lineno, "row", "expected word<TAB>label<TAB>0|1");
    }
    std::size_t label = kEmotionCount;
    for (std::size_t e = 0; e < kEmotionCount; ++e) {
      if (cols[1] == kEmotionNames[e]) label = e;
    }
    if (label == kEmotionCount) {
      throw IngestionError(path.string(), lineno, "label", "unknown label '" + cols[1] + "'");
    }
    if (cols[2] != "0" && cols[2] != "1") {
      throw IngestionError(path.string(), lineno, "flag", "expected 0 or 1");
    }
    if (cols[0].empty()) throw IngestionError(path.string(), lineno, "word", "empty word");
    auto& labels = lex.words_[cols[0]];
    if (cols[2] == "1") labels.set(label);
  }
  return lex;
}

void Lexicon::add(std::string word, Emotion e) {
  words_[std::move(word)].set(static_cast<std::size_t>(e));
}

const Lexicon::Labels* Lexicon::find(const std::string& word) const {
  auto it = words_.find(word);
  return it == words_.end() ? nullptr : &it->second;
}

EmotionVector score_emotions(const std::vector<std::string>& tokens, const Lexicon& lexicon) {
  EmotionVector out{};
  std::array<std::size_t, kEmotionCount> counts{};
  std::size_t matched = 0;
  for (const auto& t : tokens) {
    const auto* labels = lexicon.find(t);
    if (labels == nullptr || labels->none()) continue;
    ++matched;
    for (std::size_t e = 0; e < kEmotionCount; ++e) counts[e] += (*labels)[e] ? 1 : 0;
  }
  if (matched == 0) return out;
  for (std::size_t e = 0; e < kEmotionCount; ++e) {
    out[e] = static_cast<double>(counts[e]) / static_cast<double>(matched);
  }
  return out;
}

EmotionVector score_emotions(std::string_view text, const Lexicon& lexicon) {
  return score_emotions(tokenize(text), lexicon);
}

}  // namespace banditrec
