#include "banditrec/experiment.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <numeric>

#include "banditrec/error.hpp"
#include "banditrec/folds.hpp"
#include "banditrec/rng.hpp"

namespace banditrec {
namespace {

struct FoldRun {
  std::vector<EvaluationReport> reports;
  std::vector<RankingSet> rankings;
};

FoldRun run_fold(const Dataset& ds, const CorpusFeatures& corpus, const FoldSplit& split, std::size_t fold,
                 const ExperimentConfig& cfg) {
  const auto train = split.train_indices(fold);
  const auto test = split.test_indices(fold);
  const FeaturePipeline pipeline = FeaturePipeline::fit(ds, corpus, train, cfg.features);
  const Provenance prov{fold, cfg.seed};

  // Held-out items per user, users and items in index order.
  std::map<std::size_t, std::vector<std::size_t>> held_out;
  for (std::size_t idx : test) held_out[ds.interactions[idx].user].push_back(idx);

  FoldRun run;
  for (PolicyKind kind : cfg.policies) {
    const std::uint64_t seed = policy_seed(cfg.seed, fold, kind);
    Rng rng(seed);
    PolicyState policy = init_policy(kind, ds.arms.size(), pipeline.dim(), cfg.alpha, cfg.lambda, seed);
    ReplayResult trained = replay_train(std::move(policy), ds, train, pipeline, rng, prov);

    RankingSet rankings{prov, {}};
    for (const auto& [user, events] : held_out) {
      UserRanking ur;
      ur.user = user;
      ur.user_id = ds.users[user].id;
      std::vector<std::size_t> candidates;
      for (std::size_t idx : events) {
        const auto& ev = ds.interactions[idx];
        candidates.push_back(ev.item);
        ur.truth[ds.items[ev.item].id] = ev.response;
      }
      std::sort(candidates.begin(), candidates.end());
      ur.ranked = rank_items(trained.policy, user, candidates, candidates.size(), pipeline);
      rankings.users.push_back(std::move(ur));
    }

    const ReplayResult evaluated = replay_train(trained.policy, ds, test, pipeline, rng, prov);
    run.reports.push_back(build_report(evaluated, rankings, ds.arms.names(), cfg.top_k, Exec::Serial));
    run.rankings.push_back(std::move(rankings));
  }
  return run;
}

}  // namespace

std::uint64_t policy_seed(std::uint64_t seed, std::size_t fold, PolicyKind kind) {
  return mix_seed(mix_seed(seed, 0x100 + fold), static_cast<std::uint64_t>(kind) + 1);
}

ExperimentResult run_cross_validation(const Dataset& ds, const CorpusFeatures& corpus,
                                      const ExperimentConfig& cfg) {
  if (cfg.policies.empty()) throw ConfigError("no policies to evaluate");
  if (cfg.top_k < 1) throw ConfigError("top_k_max must be at least 1");
  const FoldSplit split = split_folds(ds, cfg.folds, cfg.seed);

  std::vector<FoldRun> runs(cfg.folds);
  std::vector<std::exception_ptr> errors(cfg.folds);
  const auto n = static_cast<std::ptrdiff_t>(cfg.folds);
#pragma omp parallel for schedule(dynamic) num_threads(std::max(cfg.jobs, 1))
  for (std::ptrdiff_t f = 0; f < n; ++f) {
    try {
      runs[f] = run_fold(ds, corpus, split, static_cast<std::size_t>(f), cfg);
    } catch (...) {
      errors[f] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ExperimentResult out;
  for (std::size_t p = 0; p < cfg.policies.size(); ++p) {
    for (auto& run : runs) {
      out.reports.push_back(std::move(run.reports[p]));
      out.rankings.push_back(std::move(run.rankings[p]));
    }
  }
  return out;
}

ReplayResult train_full(const Dataset& ds, const FeaturePipeline& pipeline, PolicyKind kind,
                        const ExperimentConfig& cfg) {
  std::vector<std::size_t> events(ds.interactions.size());
  std::iota(events.begin(), events.end(), 0);
  const std::uint64_t seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(kind) + 1);
  Rng rng(seed);
  PolicyState policy = init_policy(kind, ds.arms.size(), pipeline.dim(), cfg.alpha, cfg.lambda, seed);
  return replay_train(std::move(policy), ds, events, pipeline, rng);
}

}  // namespace banditrec
