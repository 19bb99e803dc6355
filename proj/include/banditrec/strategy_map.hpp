#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "banditrec/arms.hpp"

namespace banditrec {

// subreddit -> strategy arm, with a default for unlisted subreddits.
class StrategyMap {
 public:
  StrategyMap(ArmCatalog arms, ArmId default_arm);

  // CSV `subreddit,strategy`. Unknown strategy names and duplicate subreddits
  // are IngestionErrors.
  static StrategyMap load(const std::filesystem::path& path, ArmCatalog arms, ArmId default_arm);

  void assign(const std::string& subreddit, ArmId arm);
  ArmId lookup(const std::string& subreddit) const;

  const ArmCatalog& arms() const { return arms_; }
  ArmId default_arm() const { return default_arm_; }
  const std::map<std::string, ArmId>& entries() const { return entries_; }

  void write(const std::filesystem::path& path) const;

 private:
  ArmCatalog arms_;
  ArmId default_arm_;
  std::map<std::string, ArmId> entries_;
};

struct ItemRecord;
// Total: mapped strategy for the item's subreddit, else the map's default.
ArmId map_item_strategy(const ItemRecord& item, const StrategyMap& mapping);

}  // namespace banditrec
