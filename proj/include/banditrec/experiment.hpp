#pragma once

#include <cstdint>
#include <vector>

#include "banditrec/bandit.hpp"
#include "banditrec/dataset.hpp"
#include "banditrec/pipeline.hpp"
#include "banditrec/report.hpp"

namespace banditrec {

struct ExperimentConfig {
  std::vector<PolicyKind> policies{PolicyKind::LinTS, PolicyKind::LinUCB, PolicyKind::LogUCB};
  double alpha = kDefaultAlpha;
  double lambda = kDefaultLambda;
  std::uint64_t seed = 0;
  std::size_t folds = 5;
  std::size_t top_k = kDefaultTopK;
  FeatureConfig features;
  int jobs = 1;
};

// Seed of the policy (and its replay rng) for one fold.
std::uint64_t policy_seed(std::uint64_t seed, std::size_t fold, PolicyKind kind);

// Reports and rankings ordered by policy, then fold.
struct ExperimentResult {
  std::vector<EvaluationReport> reports;
  std::vector<RankingSet> rankings;
};

// Stratified k-fold evaluation. Per fold the pipeline is fitted on the
// training interactions and each policy is trained by replay over them. The
// trained policy then replays the test interactions to credit expected
// rewards, while rankings of each test user's held-out items come from the
// policy as it stood after training. Folds run concurrently on up to
// `jobs` threads; results do not depend on the thread count.
ExperimentResult run_cross_validation(const Dataset& ds, const CorpusFeatures& corpus,
                                      const ExperimentConfig& cfg);

// Replay over every interaction with a pipeline fitted on all of them.
ReplayResult train_full(const Dataset& ds, const FeaturePipeline& pipeline, PolicyKind kind,
                        const ExperimentConfig& cfg);

}  // namespace banditrec
