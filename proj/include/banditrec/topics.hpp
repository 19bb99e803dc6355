#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace banditrec {

inline constexpr std::size_t kDefaultTopicCount = 120;

class TopicSet {
 public:
  TopicSet() = default;
  explicit TopicSet(std::vector<std::string> topics);

  const std::vector<std::string>& topics() const { return topics_; }
  std::size_t size() const { return topics_.size(); }
  std::optional<std::size_t> index_of(const std::string& subreddit) const;

  // One-hot over topics; all zero when the subreddit is not a topic.
  std::vector<double> bits(const std::string& subreddit) const;

 private:
  std::vector<std::string> topics_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct TopicFeatures {
  TopicSet topics;
  std::vector<std::vector<double>> item_bits;
};

// Topics are the n most frequent subreddits, ties broken lexicographically.
// Throws ContractError when `item_subreddits` is empty.
TopicFeatures build_topic_features(const std::vector<std::string>& item_subreddits,
                                   std::size_t n = kDefaultTopicCount);

}  // namespace banditrec
