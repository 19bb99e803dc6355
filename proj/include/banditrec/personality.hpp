#pragma once

#include <array>
#include <filesystem>
#include <string_view>

#include <Eigen/Core>

#include "banditrec/text.hpp"

namespace banditrec {

inline constexpr std::size_t kTraitCount = 5;
inline constexpr std::array<std::string_view, kTraitCount> kTraitNames = {
    "openness", "conscientiousness", "extraversion", "agreeableness", "neuroticism"};

using BigFive = std::array<double, kTraitCount>;

// Linear map from an EmotionVector to Big Five trait scores.
//
// Rows are traits (openness, conscientiousness, extraversion, agreeableness,
// neuroticism); columns follow kEmotionNames. Default weights:
//
//   openness          = 0.4 anticipation + 0.4 surprise + 0.1 trust + 0.1 joy
//   conscientiousness = 0.5 trust + 0.3 anticipation + 0.2 positive - 0.2 anger
//   extraversion      = 0.5 joy + 0.3 positive + 0.2 surprise
//   agreeableness     = 0.4 trust + 0.2 joy + 0.4 positive - 0.3 anger - 0.3 disgust
//   neuroticism       = 0.35 fear + 0.35 sadness + 0.3 anger + 0.3 negative - 0.3 positive
struct PersonalityMap {
  using Weights = Eigen::Matrix<double, kTraitCount, kEmotionCount>;
  Weights weights;

  static PersonalityMap defaults();
  // CSV with header `trait,anger,...,positive` and one row per trait in order.
  static PersonalityMap load(const std::filesystem::path& path);
};

// clamp01(weights * emotion).
BigFive infer_personality(const EmotionVector& emotion,
                          const PersonalityMap& map = PersonalityMap::defaults());

}  // namespace banditrec
