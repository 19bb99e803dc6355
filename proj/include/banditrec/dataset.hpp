#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "banditrec/arms.hpp"
#include "banditrec/strategy_map.hpp"

namespace banditrec {

// Per-user cap on posts and comments kept for text features.
inline constexpr std::size_t kRecentTextCap = 100;

struct Comment {
  std::string author;
  std::string body;
  std::int64_t created = 0;
};

struct UserRecord {
  std::string id;
  std::int64_t karma = 0;
  std::vector<std::string> subreddits;
  // Authored posts and comments, most recent kRecentTextCap of each.
  std::vector<std::string> posts;
  std::vector<std::string> comments;
  // Extra numeric attributes (trailing users.csv columns; synthetic latents).
  std::vector<double> latent;
};

struct ItemRecord {
  std::string id;
  std::string author;
  std::string title;
  std::string text;
  std::string subreddit;
  std::int64_t score = 0;
  double upvote_ratio = 0.0;
  std::int64_t num_comments = 0;
  std::vector<Comment> comments;
  std::int64_t created = 0;
  ArmId strategy = 0;
  std::vector<double> latent;
};

// Indices refer to Dataset::users / Dataset::items.
struct Interaction {
  std::size_t user = 0;
  std::size_t item = 0;
  int response = 0;
  std::int64_t timestamp = 0;
};

class Dataset {
 public:
  ArmCatalog arms;
  std::vector<UserRecord> users;
  std::vector<ItemRecord> items;
  // Ascending by timestamp, ties by (user_id, item_id).
  std::vector<Interaction> interactions;
  std::vector<std::string> warnings;

  // Rebuilds id lookups; throws IngestionError on duplicate ids.
  void reindex();
  // Sorts interactions and keeps only the latest of duplicate (user, item) pairs.
  void normalize_interactions();
  // Copies every user's authored posts/comments (capped) from the items.
  void collect_user_texts();

  std::optional<std::size_t> find_user(const std::string& id) const;
  std::optional<std::size_t> find_item(const std::string& id) const;
  std::size_t positive_count() const;

 private:
  std::unordered_map<std::string, std::size_t> user_index_;
  std::unordered_map<std::string, std::size_t> item_index_;
};

struct DatasetPaths {
  std::filesystem::path users;
  std::filesystem::path posts;
  std::filesystem::path interactions;
};

// users.csv: user_id,karma,subreddits[,extra numeric columns] (subreddits pipe-separated)
// posts.jsonl: {post_id, author, title, text, subreddit, score, upvote_ratio,
//   num_comments, comments[]} per line; comments are strings or
//   {author, body, created_utc}; optional created_utc, strategy, latent.
// interactions.csv: user_id,item_id,response,timestamp
//
// Items take their strategy from an explicit "strategy" field, else from
// `strategies`. Throws IngestionError (file, line, field) on schema problems
// and ReferentialError on dangling ids.
Dataset load_dataset(const DatasetPaths& paths, const StrategyMap& strategies);

// Writes the normalized dataset (users.csv, posts.jsonl with resolved
// strategies, interactions.csv, arms.txt) into `dir`.
void write_dataset(const Dataset& ds, const std::filesystem::path& dir);

DatasetPaths dataset_paths_in(const std::filesystem::path& dir);

// Reads a directory written by write_dataset. Throws StateError when it is
// missing.
Dataset load_normalized_dataset(const std::filesystem::path& dir);

}  // namespace banditrec
