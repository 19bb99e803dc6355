#include "banditrec/cli.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <optional>
#include <set>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "banditrec/config.hpp"
#include "banditrec/dataset.hpp"
#include "banditrec/error.hpp"
#include "banditrec/experiment.hpp"
#include "banditrec/format.hpp"
#include "banditrec/parallel.hpp"
#include "banditrec/pipeline.hpp"
#include "banditrec/plots.hpp"
#include "banditrec/policy_io.hpp"
#include "banditrec/replay.hpp"
#include "banditrec/report.hpp"
#include "banditrec/strategy_map.hpp"
#include "banditrec/synthetic.hpp"

namespace banditrec {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::string config;
  std::string out;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> policy;
  std::optional<double> alpha;
  std::optional<double> lambda;
  std::optional<std::size_t> folds;
  std::optional<std::size_t> top_k;
  std::optional<std::string> users;
  std::optional<std::string> posts;
  std::optional<std::string> interactions;
  std::optional<std::string> strategy_map;
  std::string user;
  std::size_t k = kDefaultTopK;
  int jobs = 1;
};

fs::path dataset_dir(const Options& o) { return fs::path(o.out) / "dataset"; }
fs::path pipeline_dir(const Options& o) { return fs::path(o.out) / "pipeline"; }
fs::path policy_path(const Options& o, PolicyKind kind) {
  return fs::path(o.out) / fmt::format("policy_{}.json", to_string(kind));
}

// File config, then BANDITREC_SEED, then flags; validated as a whole.
RunConfig resolve_config(const Options& o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
  apply_seed_env(cfg);
  for (const auto& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(s + ": expected section.key=value");
    cfg.set(s.substr(0, eq), s.substr(eq + 1), fs::current_path());
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.policy) cfg.set("policy.name", *o.policy);
  if (o.alpha) cfg.alpha = *o.alpha;
  if (o.lambda) cfg.lambda = *o.lambda;
  if (o.folds) cfg.folds = *o.folds;
  if (o.top_k) cfg.top_k_max = *o.top_k;
  if (o.users) cfg.data.users = *o.users;
  if (o.posts) cfg.data.posts = *o.posts;
  if (o.interactions) cfg.data.interactions = *o.interactions;
  if (o.strategy_map) cfg.strategy_map = *o.strategy_map;
  cfg.validate();
  return cfg;
}

TextResources load_resources(const RunConfig& cfg) {
  TextResources res;
  if (!cfg.data.lexicon.empty()) res.lexicon = Lexicon::load(cfg.data.lexicon);
  if (!cfg.data.embeddings.empty()) res.embeddings = Embeddings::load(cfg.data.embeddings);
  if (!cfg.data.empathy_seeds.empty()) res.empathy_seeds = load_word_list(cfg.data.empathy_seeds);
  if (!cfg.data.personality.empty()) res.personality = PersonalityMap::load(cfg.data.personality);
  return res;
}

void print_dataset_summary(const Dataset& ds, std::ostream& out) {
  const double rate = ds.interactions.empty()
                          ? 0.0
                          : static_cast<double>(ds.positive_count()) / static_cast<double>(ds.interactions.size());
  out << fmt::format("users {} items {} interactions {} positive rate {}\n", ds.users.size(), ds.items.size(),
                     ds.interactions.size(), format_real(rate));
}

void print_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w << '\n';
}

void evaluate_and_write(const Dataset& ds, const RunConfig& cfg, const TextResources& res, const Options& o,
                        std::ostream& out) {
  const ExperimentConfig exp = cfg.experiment(o.jobs);
  const CorpusFeatures corpus = extract_corpus_features(ds, res, exp.features);
  const ExperimentResult result = run_cross_validation(ds, corpus, exp);
  const fs::path dir(o.out);
  fs::create_directories(dir);
  write_report_arms(dir / "report_arms.csv", result.reports);
  write_report_metrics(dir / "report_metrics.csv", result.reports);
  write_rankings(dir / "rankings.csv", result.reports, result.rankings);
  const auto svgs = emit_plots(result.reports, dir);
  out << fmt::format("wrote report_arms.csv, report_metrics.csv, rankings.csv and {} plots to {}\n", svgs.size(),
                     dir.string());
}

int cmd_ingest(const Options& o, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = resolve_config(o);
  if (cfg.data.users.empty() || cfg.data.posts.empty() || cfg.data.interactions.empty()) {
    throw ConfigError("data: users, posts and interactions paths are required for ingest");
  }
  const ArmCatalog arms = cfg.arms();
  const ArmId fallback = arms.parse(cfg.default_strategy);
  const StrategyMap mapping =
      cfg.strategy_map.empty() ? StrategyMap(arms, fallback) : StrategyMap::load(cfg.strategy_map, arms, fallback);
  Dataset ds = load_dataset({cfg.data.users, cfg.data.posts, cfg.data.interactions}, mapping);
  write_dataset(ds, dataset_dir(o));
  print_warnings(ds.warnings, err);
  print_dataset_summary(ds, out);
  return kExitOk;
}

int cmd_featurize(const Options& o, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = resolve_config(o);
  const TextResources res = load_resources(cfg);
  const Dataset ds = load_normalized_dataset(dataset_dir(o));
  const ExperimentConfig exp = cfg.experiment(o.jobs);
  const CorpusFeatures corpus = extract_corpus_features(ds, res, exp.features);
  std::vector<std::size_t> all(ds.interactions.size());
  std::iota(all.begin(), all.end(), 0);
  const FeaturePipeline pipeline = FeaturePipeline::fit(ds, corpus, all, exp.features);
  pipeline.save(pipeline_dir(o));
  print_warnings(pipeline.warnings(), err);
  out << fmt::format("context dimension {} ({} user columns selected)\n", pipeline.dim(),
                     pipeline.selected_user_columns().size());
  return kExitOk;
}

int cmd_train(const Options& o, std::ostream& out, std::ostream&) {
  const RunConfig cfg = resolve_config(o);
  const Dataset ds = load_normalized_dataset(dataset_dir(o));
  const FeaturePipeline pipeline = FeaturePipeline::load(pipeline_dir(o), ds);
  const ExperimentConfig exp = cfg.experiment(o.jobs);
  for (PolicyKind kind : cfg.policies) {
    const ReplayResult r = train_full(ds, pipeline, kind, exp);
    save_policy(r.policy, policy_path(o, kind));
    out << fmt::format("{}: matched {} of {} events\n", to_string(kind), r.matched_events, r.total_events);
  }
  return kExitOk;
}

int cmd_evaluate(const Options& o, std::ostream& out, std::ostream&) {
  const RunConfig cfg = resolve_config(o);
  const TextResources res = load_resources(cfg);
  const Dataset ds = load_normalized_dataset(dataset_dir(o));
  evaluate_and_write(ds, cfg, res, o, out);
  return kExitOk;
}

int cmd_recommend(const Options& o, std::ostream& out, std::ostream&) {
  const RunConfig cfg = resolve_config(o);
  if (o.k < 1) throw ConfigError("--k: must be at least 1");
  const Dataset ds = load_normalized_dataset(dataset_dir(o));
  const auto user = ds.find_user(o.user);
  if (!user) throw Error("unknown user '" + o.user + "'");
  const FeaturePipeline pipeline = FeaturePipeline::load(pipeline_dir(o), ds);
  const PolicyState policy = load_policy(policy_path(o, cfg.policies.front()));

  std::set<std::size_t> seen;
  for (const auto& x : ds.interactions) {
    if (x.user == *user) seen.insert(x.item);
  }
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < ds.items.size(); ++i) {
    if (!seen.count(i)) candidates.push_back(i);
  }
  if (candidates.empty()) {
    for (std::size_t i = 0; i < ds.items.size(); ++i) candidates.push_back(i);
  }
  const auto ranked = rank_items(policy, *user, candidates, o.k, pipeline);
  out << "rank,item_id,strategy,score\n";
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    out << r + 1 << ',' << ranked[r].item_id << ',' << ds.arms.name(pipeline.item_strategy(ranked[r].item)) << ','
        << format_real(ranked[r].score) << '\n';
  }
  return kExitOk;
}

void write_truth(const SyntheticTruth& truth, const fs::path& path) {
  nlohmann::json doc;
  doc["surface"] = std::string(to_string(truth.surface));
  doc["scale"] = truth.scale;
  doc["intercept"] = truth.intercept;
  auto theta = nlohmann::json::array();
  for (const auto& t : truth.theta) theta.push_back(std::vector<double>(t.begin(), t.end()));
  doc["theta"] = theta;
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << doc.dump(1) << '\n';
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream&) {
  const RunConfig cfg = resolve_config(o);
  const TextResources res = load_resources(cfg);
  const SyntheticData data = generate_synthetic(cfg.synthetic);
  write_dataset(data.dataset, dataset_dir(o));
  data.strategy_map.write(dataset_dir(o) / "strategy_map.csv");
  write_truth(data.truth, fs::path(o.out) / "synthetic_truth.json");
  print_dataset_summary(data.dataset, out);
  evaluate_and_write(data.dataset, cfg, res, o, out);
  return kExitOk;
}

int exit_code(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const IngestionError*>(&e) ||
      dynamic_cast<const ReferentialError*>(&e)) {
    return kExitInvalid;
  }
  return kExitRuntime;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Contextual bandit recommender for emotion-regulation strategies", "banditrec"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "INI config file")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "Artifact directory")->required();
    sub->add_option("--set", o.sets, "Override a config key, section.key=value");
    sub->add_option("--seed", o.seed, "Seed (overrides config and BANDITREC_SEED)");
    sub->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  };
  auto tuning = [&](CLI::App* sub) {
    sub->add_option("--policy", o.policy, "Comma-separated policy names");
    sub->add_option("--alpha", o.alpha, "Exploration weight");
    sub->add_option("--lambda", o.lambda, "Ridge prior strength");
  };
  auto evaluation = [&](CLI::App* sub) {
    sub->add_option("--folds", o.folds, "Cross-validation folds");
    sub->add_option("--top-k", o.top_k, "Largest k of the metric curves");
  };

  auto* ingest = app.add_subcommand("ingest", "Validate raw files into a normalized dataset");
  common(ingest);
  ingest->add_option("--users", o.users, "users.csv");
  ingest->add_option("--posts", o.posts, "posts.jsonl");
  ingest->add_option("--interactions", o.interactions, "interactions.csv");
  ingest->add_option("--strategy-map", o.strategy_map, "subreddit,strategy CSV");

  auto* featurize = app.add_subcommand("featurize", "Fit and save the feature pipeline");
  common(featurize);

  auto* train = app.add_subcommand("train", "Train policies by replay over all interactions");
  common(train);
  tuning(train);

  auto* evaluate = app.add_subcommand("evaluate", "Cross-validate policies and write reports and plots");
  common(evaluate);
  tuning(evaluate);
  evaluation(evaluate);

  auto* recommend = app.add_subcommand("recommend", "Print the top-k items for a user");
  common(recommend);
  recommend->add_option("--user", o.user, "User id")->required();
  recommend->add_option("--k", o.k, "Number of items");
  recommend->add_option("--policy", o.policy, "Policy name");

  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic dataset and evaluate on it");
  common(simulate);
  tuning(simulate);
  evaluation(simulate);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  set_worker_count(o.jobs);
  try {
    if (ingest->parsed()) return cmd_ingest(o, out, err);
    if (featurize->parsed()) return cmd_featurize(o, out, err);
    if (train->parsed()) return cmd_train(o, out, err);
    if (evaluate->parsed()) return cmd_evaluate(o, out, err);
    if (recommend->parsed()) return cmd_recommend(o, out, err);
    return cmd_simulate(o, out, err);
  } catch (const IngestionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e);
  }
}

}  // namespace banditrec
