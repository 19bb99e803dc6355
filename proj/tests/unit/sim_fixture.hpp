#pragma once

#include <numeric>
#include <vector>

#include "banditrec/pipeline.hpp"
#include "banditrec/synthetic.hpp"

namespace banditrec::testing {

// Synthetic dataset with a pipeline fitted on every interaction.
struct SimFixture {
  SyntheticData data;
  CorpusFeatures corpus;
  FeaturePipeline pipeline;

  explicit SimFixture(const SyntheticConfig& cfg) : data(generate_synthetic(cfg)) {
    FeatureConfig features;
    features.seed = cfg.seed;
    corpus = extract_corpus_features(data.dataset, TextResources{}, features);
    pipeline = FeaturePipeline::fit(data.dataset, corpus, all(), features);
  }

  const Dataset& ds() const { return data.dataset; }

  std::vector<std::size_t> all() const {
    std::vector<std::size_t> v(data.dataset.interactions.size());
    std::iota(v.begin(), v.end(), 0);
    return v;
  }
};

}  // namespace banditrec::testing
