#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "banditrec/bandit.hpp"
#include "banditrec/dataset.hpp"
#include "banditrec/empathy.hpp"
#include "banditrec/parallel.hpp"
#include "banditrec/personality.hpp"
#include "banditrec/text.hpp"
#include "banditrec/topics.hpp"

namespace banditrec {

struct TextResources {
  Lexicon lexicon;
  Embeddings embeddings;
  std::vector<std::string> empathy_seeds;
  PersonalityMap personality = PersonalityMap::defaults();
};

struct FeatureConfig {
  std::size_t nmf_rank = 16;
  std::size_t nmf_iters = 200;
  double nmf_tol = 1e-4;
  std::size_t top_subreddits = kDefaultTopicCount;
  std::size_t select_m = 50;
  std::uint64_t seed = 0;
};

struct UserFeatures {
  std::string user_id;
  std::int64_t karma = 0;
  std::vector<std::string> subreddits;
  EmotionVector emotion{};
  BigFive big_five{};
  double empathy = 0.0;
  std::vector<double> comment_vec;
  std::vector<double> latent;
};

struct ItemFeatures {
  std::string item_id;
  std::string subreddit;
  std::int64_t score = 0;
  double upvote_ratio = 0.0;
  std::int64_t num_comments = 0;
  EmotionVector emotion{};  // post body
  EmotionVector tone{};     // comments
  std::vector<double> topic_bits;
  ArmId strategy = 0;
  std::vector<double> latent;
  // NMF vector of the post text; feeds users' aggregated comment vectors.
  std::vector<double> text_vec;
};

// Label-free features of every user and item. Text is tokenized once; user
// documents (recent comments and posts) and item documents (title + body)
// share one tf-idf vocabulary and one NMF factorization.
struct CorpusFeatures {
  std::vector<UserFeatures> users;
  std::vector<ItemFeatures> items;
  std::vector<std::string> vocabulary;
  TopicSet topics;
  std::size_t nmf_rank = 0;
};

CorpusFeatures extract_corpus_features(const Dataset& ds, const TextResources& resources,
                                       const FeatureConfig& cfg, Exec exec = Exec::Parallel);

// Fitted transform from (user, item) to a context vector:
//
//   [ standardized selected user columns | standardized item columns | strategy one-hot ]
//
// Fitting uses only the training interactions: user aggregates, feature
// selection, standardization statistics (mean/std over training rows; std
// below 1e-8 passes the column through) and per-arm descriptors (mean
// standardized item vector of the arm's training items).
class FeaturePipeline {
 public:
  static constexpr double kStdFloor = 1e-8;

  FeaturePipeline() = default;

  static FeaturePipeline fit(const Dataset& ds, const CorpusFeatures& corpus,
                             std::span<const std::size_t> train_interactions,
                             const FeatureConfig& cfg);

  bool fitted() const { return fitted_; }
  std::size_t dim() const;
  std::size_t arm_count() const;
  std::size_t user_count() const { return user_ids_.size(); }
  std::size_t item_count() const { return item_ids_.size(); }
  const std::string& user_id(std::size_t u) const { return user_ids_.at(u); }
  const std::string& item_id(std::size_t i) const { return item_ids_.at(i); }
  ArmId item_strategy(std::size_t item) const;

  // Throws StateError when unfitted.
  Vector assemble_context(std::size_t user, std::size_t item) const;
  // Selection contexts: user part joined with each arm's descriptor.
  std::vector<Vector> arm_contexts(std::size_t user) const;

  const std::vector<std::string>& user_columns() const { return user_columns_; }
  const std::vector<std::string>& item_columns() const { return item_columns_; }
  const std::vector<std::size_t>& selected_user_columns() const { return selected_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  nlohmann::json manifest() const;

  // manifest.json, user_features.csv and item_features.csv in `dir`.
  void save(const std::filesystem::path& dir) const;
  // Throws StateError when files are missing or do not match `ds`.
  static FeaturePipeline load(const std::filesystem::path& dir, const Dataset& ds);

 private:
  Vector user_part(std::size_t user) const;
  void require_fitted() const;

  bool fitted_ = false;
  std::vector<std::string> arm_names_;
  std::vector<std::string> user_ids_;
  std::vector<std::string> item_ids_;
  std::vector<ArmId> item_strategy_;
  std::vector<std::string> user_columns_;
  std::vector<std::string> item_columns_;
  Matrix user_raw_;  // users x user columns, quantized
  Matrix item_raw_;  // items x item columns, quantized
  std::vector<std::size_t> selected_;
  Vector mean_;  // selected user columns then item columns
  Vector std_;
  std::vector<Vector> arm_descriptors_;
  Matrix item_std_;  // standardized item rows
  std::vector<std::string> vocabulary_;
  std::vector<std::string> topics_;
  FeatureConfig config_;
  std::size_t train_rows_ = 0;
  std::vector<std::string> warnings_;
};

}  // namespace banditrec
