#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "banditrec/arms.hpp"
#include "banditrec/bandit.hpp"
#include "banditrec/experiment.hpp"
#include "banditrec/synthetic.hpp"

namespace banditrec {

struct DataConfig {
  std::filesystem::path users;
  std::filesystem::path posts;
  std::filesystem::path interactions;
  std::filesystem::path lexicon;
  std::filesystem::path embeddings;
  std::filesystem::path empathy_seeds;
  std::filesystem::path personality;
};

// INI file with sections [policy] [eval] [features] [data] [arms] [synthetic].
// Relative data paths resolve against the config file's directory.
struct RunConfig {
  std::vector<PolicyKind> policies{PolicyKind::LinTS, PolicyKind::LinUCB, PolicyKind::LogUCB};
  double alpha = kDefaultAlpha;
  double lambda = kDefaultLambda;
  std::uint64_t seed = 0;

  std::size_t folds = 5;
  std::size_t top_k_max = kDefaultTopK;

  std::size_t nmf_rank = 16;
  std::size_t top_subreddits = kDefaultTopicCount;
  std::size_t select_m = 50;

  DataConfig data;

  std::vector<std::string> arm_names = ArmCatalog().names();
  std::filesystem::path strategy_map;
  std::string default_strategy = "Distraction";

  SyntheticConfig synthetic;

  // Sets one key; `key` is "section.name". Throws ConfigError naming the key
  // when it is unknown or the value does not parse. `base` resolves paths.
  void set(const std::string& key, const std::string& value,
           const std::filesystem::path& base = {});

  // Cross-field checks. Throws ConfigError naming the offending key.
  void validate() const;

  ExperimentConfig experiment(int jobs) const;
  ArmCatalog arms() const { return ArmCatalog(arm_names); }
};

// Throws ConfigError for unreadable files, syntax errors and unknown keys.
RunConfig load_config(const std::filesystem::path& path);

// Keys accepted by RunConfig::set, in file order.
const std::vector<std::string>& config_keys();

inline constexpr const char* kSeedEnvVar = "BANDITREC_SEED";

// Applies BANDITREC_SEED when it is set.
void apply_seed_env(RunConfig& cfg);

}  // namespace banditrec
