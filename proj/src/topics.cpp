#include "banditrec/topics.hpp"

#include <algorithm>
#include <map>

#include "banditrec/error.hpp"

namespace banditrec {

TopicSet::TopicSet(std::vector<std::string> topics) : topics_(std::move(topics)) {
  for (std::size_t i = 0; i < topics_.size(); ++i) index_.emplace(topics_[i], i);
}

std::optional<std::size_t> TopicSet::index_of(const std::string& subreddit) const {
  auto it = index_.find(subreddit);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<double> TopicSet::bits(const std::string& subreddit) const {
  std::vector<double> out(topics_.size(), 0.0);
  if (auto i = index_of(subreddit)) out[*i] = 1.0;
  return out;
}

TopicFeatures build_topic_features(const std::vector<std::string>& item_subreddits,
                                   std::size_t n) {
  if (item_subreddits.empty()) throw ContractError("topic extraction needs at least one item");
  std::map<std::string, std::size_t> freq;
  for (const auto& s : item_subreddits) ++freq[s];
  std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> topics;
  for (std::size_t i = 0; i < ranked.size() && i < n; ++i) topics.push_back(ranked[i].first);

  TopicFeatures out{TopicSet(std::move(topics)), {}};
  out.item_bits.reserve(item_subreddits.size());
  for (const auto& s : item_subreddits) out.item_bits.push_back(out.topics.bits(s));
  return out;
}

}  // namespace banditrec
