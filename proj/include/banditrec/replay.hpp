#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "banditrec/bandit.hpp"
#include "banditrec/dataset.hpp"
#include "banditrec/pipeline.hpp"
#include "banditrec/rng.hpp"

namespace banditrec {

struct ArmTally {
  std::size_t matched = 0;
  std::size_t rewarded = 0;

  // Empty when the arm never matched.
  std::optional<double> mean_reward() const;
};

// Which fold and seed produced a result; reports refuse to mix provenances.
struct Provenance {
  std::size_t fold = 0;
  std::uint64_t seed = 0;

  bool operator==(const Provenance&) const = default;
};

struct ReplayResult {
  Provenance provenance;
  std::vector<ArmTally> arms;
  std::size_t total_events = 0;
  std::size_t matched_events = 0;
  PolicyState policy;

  double matched_fraction() const;
};

// Picks an arm from per-arm contexts. The default is select_arm.
using ArmChooser = std::function<ArmId(const PolicyState&, std::span<const Vector>, Rng&)>;

// Rejection replay over `events` (interaction indices, time-ordered). For each
// event the policy chooses among arm contexts of the user; when the choice
// equals the logged strategy of the item, the reward is recorded and the
// policy learns from the item's full context. Other events are skipped.
// Throws ContractError on out-of-order events or an arm-count mismatch and
// ReferentialError when an item has no mapped strategy.
ReplayResult replay_train(PolicyState policy, const Dataset& ds, std::span<const std::size_t> events,
                          const FeaturePipeline& pipeline, Rng& rng, Provenance provenance = {},
                          const ArmChooser& chooser = {});

struct RankedItem {
  std::size_t item = 0;
  std::string item_id;
  double score = 0.0;
};

// Greedy ranking of `candidates` (item indices) for `user`: each item is scored
// by its strategy arm's model on the assembled (user, item) context without
// exploration. Descending score, ties by item id; at most k items.
// Throws ContractError when k < 1 or candidates is empty.
std::vector<RankedItem> rank_items(const PolicyState& policy, std::size_t user,
                                   std::span<const std::size_t> candidates, std::size_t k,
                                   const FeaturePipeline& pipeline);

}  // namespace banditrec
