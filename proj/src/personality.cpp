#include "banditrec/personality.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

#include "banditrec/error.hpp"

namespace banditrec {

PersonalityMap PersonalityMap::defaults() {
  PersonalityMap m;
  // anger fear antic trust surpr sadn joy disg neg pos
  m.weights << 0.0, 0.0, 0.4, 0.1, 0.4, 0.0, 0.1, 0.0, 0.0, 0.0,  //
      -0.2, 0.0, 0.3, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.2,          //
      0.0, 0.0, 0.0, 0.0, 0.2, 0.0, 0.5, 0.0, 0.0, 0.3,           //
      -0.3, 0.0, 0.0, 0.4, 0.0, 0.0, 0.2, -0.3, 0.0, 0.4,         //
      0.3, 0.35, 0.0, 0.0, 0.0, 0.35, 0.0, 0.0, 0.3, -0.3;
  return m;
}

PersonalityMap PersonalityMap::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError(path.string(), 0, "file", "cannot open personality map");
  PersonalityMap m;
  std::string line;
  std::size_t lineno = 0;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, ',')) cols.push_back(col);
    if (cols.size() != kEmotionCount + 1) {
      throw IngestionError(path.string(), lineno, "row", "expected trait plus 10 weights");
    }
    if (lineno == 1 && cols[0] == "trait") continue;
    if (row >= kTraitCount) throw IngestionError(path.string(), lineno, "row", "too many traits");
    if (cols[0] != kTraitNames[row]) {
      throw IngestionError(path.string(), lineno, "trait",
                           "expected '" + std::string(kTraitNames[row]) + "'");
    }
    for (std::size_t e = 0; e < kEmotionCount; ++e) {
      try {
        std::size_t used = 0;
        m.weights(row, e) = std::stod(cols[e + 1], &used);
        if (used != cols[e + 1].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw IngestionError(path.string(), lineno, std::string(kEmotionNames[e]), "not a number");
      }
    }
    ++row;
  }
  if (row != kTraitCount) throw IngestionError(path.string(), lineno, "row", "expected 5 traits");
  return m;
}

BigFive infer_personality(const EmotionVector& emotion, const PersonalityMap& map) {
  const Eigen::Map<const Eigen::Matrix<double, kEmotionCount, 1>> e(emotion.data());
  const Eigen::Matrix<double, kTraitCount, 1> raw = map.weights * e;
  BigFive out;
  for (std::size_t t = 0; t < kTraitCount; ++t) out[t] = std::clamp(raw(t), 0.0, 1.0);
  return out;
}

}  // namespace banditrec
