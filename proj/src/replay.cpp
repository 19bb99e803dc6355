#include "banditrec/replay.hpp"

#include <algorithm>

#include "banditrec/error.hpp"

namespace banditrec {

std::optional<double> ArmTally::mean_reward() const {
  if (matched == 0) return std::nullopt;
  return static_cast<double>(rewarded) / static_cast<double>(matched);
}

double ReplayResult::matched_fraction() const {
  return total_events == 0 ? 0.0 : static_cast<double>(matched_events) / static_cast<double>(total_events);
}

ReplayResult replay_train(PolicyState policy, const Dataset& ds, std::span<const std::size_t> events,
                          const FeaturePipeline& pipeline, Rng& rng, Provenance provenance,
                          const ArmChooser& chooser) {
  if (policy.arms != pipeline.arm_count()) {
    throw ContractError("policy and pipeline disagree on the number of arms");
  }
  if (policy.dim != pipeline.dim()) {
    throw ContractError("policy and pipeline disagree on the context dimension");
  }
  ReplayResult out;
  out.provenance = provenance;
  out.arms.resize(policy.arms);
  std::int64_t last = std::numeric_limits<std::int64_t>::min();
  for (std::size_t idx : events) {
    if (idx >= ds.interactions.size()) throw ContractError("event index out of range");
    const Interaction& ev = ds.interactions[idx];
    if (ev.timestamp < last) throw ContractError("replay events are not in time order");
    last = ev.timestamp;
    const ArmId logged = pipeline.item_strategy(ev.item);
    const auto contexts = pipeline.arm_contexts(ev.user);
    const ArmId chosen = chooser ? chooser(policy, contexts, rng) : select_arm(policy, contexts, rng);
    ++out.total_events;
    if (chosen != logged) continue;
    ++out.matched_events;
    auto& tally = out.arms[chosen];
    ++tally.matched;
    tally.rewarded += ev.response == 1 ? 1 : 0;
    update(policy, chosen, pipeline.assemble_context(ev.user, ev.item), ev.response);
  }
  out.policy = std::move(policy);
  return out;
}

std::vector<RankedItem> rank_items(const PolicyState& policy, std::size_t user,
                                   std::span<const std::size_t> candidates, std::size_t k,
                                   const FeaturePipeline& pipeline) {
  if (k < 1) throw ContractError("k must be at least 1");
  if (candidates.empty()) throw ContractError("no candidate items to rank");
  std::vector<RankedItem> ranked;
  ranked.reserve(candidates.size());
  for (std::size_t item : candidates) {
    const Vector x = pipeline.assemble_context(user, item);
    ranked.push_back({item, pipeline.item_id(item), greedy_score(policy, pipeline.item_strategy(item), x)});
  }
  std::sort(ranked.begin(), ranked.end(), [](const RankedItem& a, const RankedItem& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.item_id < b.item_id;
  });
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

}  // namespace banditrec
