#include "banditrec/strategy_map.hpp"

#include <fstream>
#include <vector>

#include "banditrec/csv.hpp"
#include "banditrec/dataset.hpp"
#include "banditrec/error.hpp"

namespace banditrec {

StrategyMap::StrategyMap(ArmCatalog arms, ArmId default_arm)
    : arms_(std::move(arms)), default_arm_(default_arm) {
  if (default_arm_ >= arms_.size()) throw ConfigError("default strategy out of range");
}

StrategyMap StrategyMap::load(const std::filesystem::path& path, ArmCatalog arms,
                              ArmId default_arm) {
  std::ifstream in(path);
  if (!in) throw IngestionError(path.string(), 0, "file", "cannot open strategy map");
  StrategyMap map(std::move(arms), default_arm);
  std::string line;
  std::vector<std::string> f;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!csv::split(line, f) || f.size() != 2) {
      throw IngestionError(path.string(), lineno, "row", "expected subreddit,strategy");
    }
    if (lineno == 1) {
      if (f[0] != "subreddit" || f[1] != "strategy") {
        throw IngestionError(path.string(), lineno, "header", "expected 'subreddit,strategy'");
      }
      continue;
    }
    if (!map.arms_.contains(f[1])) {
      throw IngestionError(path.string(), lineno, "strategy", "unknown strategy '" + f[1] + "'");
    }
    if (map.entries_.count(f[0]) != 0) {
      throw IngestionError(path.string(), lineno, "subreddit", "duplicate subreddit '" + f[0] + "'");
    }
    map.entries_.emplace(f[0], map.arms_.parse(f[1]));
  }
  if (lineno == 0) throw IngestionError(path.string(), 1, "header", "empty file");
  return map;
}

void StrategyMap::assign(const std::string& subreddit, ArmId arm) {
  if (arm >= arms_.size()) throw ContractError("strategy arm out of range");
  entries_[subreddit] = arm;
}

ArmId StrategyMap::lookup(const std::string& subreddit) const {
  auto it = entries_.find(subreddit);
  return it == entries_.end() ? default_arm_ : it->second;
}

void StrategyMap::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "subreddit,strategy\n";
  for (const auto& [sub, arm] : entries_) out << csv::escape(sub) << ',' << arms_.name(arm) << '\n';
}

ArmId map_item_strategy(const ItemRecord& item, const StrategyMap& mapping) {
  return mapping.lookup(item.subreddit);
}

}  // namespace banditrec
