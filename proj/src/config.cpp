#include "banditrec/config.hpp"

#include <charconv>
#include <cstdlib>
#include <functional>
#include <map>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "banditrec/error.hpp"

namespace banditrec {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    const auto end = value.find(',', start);
    const auto item = trim(value.substr(start, end == std::string::npos ? std::string::npos : end - start));
    if (!item.empty()) out.push_back(item);
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw ConfigError(key + ": " + what);
}

template <class T>
T parse_integer(const std::string& key, const std::string& value) {
  T out{};
  const auto v = trim(value);
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    bad(key, "expected a non-negative integer, got '" + value + "'");
  }
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  const auto v = trim(value);
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    bad(key, "expected a number, got '" + value + "'");
  }
  if (used != v.size() || !std::isfinite(out)) bad(key, "expected a number, got '" + value + "'");
  return out;
}

std::filesystem::path parse_path(const std::string& value, const std::filesystem::path& base) {
  const std::filesystem::path p(trim(value));
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string&,
                                  const std::filesystem::path&)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  using P = std::filesystem::path;
  auto size = [](std::size_t RunConfig::*field) -> Setter {
    return [field](RunConfig& c, const std::string& k, const std::string& v, const P&) {
      c.*field = parse_integer<std::size_t>(k, v);
    };
  };
  auto syn_size = [](std::size_t SyntheticConfig::*field) -> Setter {
    return [field](RunConfig& c, const std::string& k, const std::string& v, const P&) {
      c.synthetic.*field = parse_integer<std::size_t>(k, v);
    };
  };
  auto syn_real = [](double SyntheticConfig::*field) -> Setter {
    return [field](RunConfig& c, const std::string& k, const std::string& v, const P&) {
      c.synthetic.*field = parse_real(k, v);
    };
  };
  auto path = [](std::filesystem::path DataConfig::*field) -> Setter {
    return [field](RunConfig& c, const std::string&, const std::string& v, const P& base) {
      c.data.*field = parse_path(v, base);
    };
  };
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"policy.name",
       [](RunConfig& c, const std::string& k, const std::string& v, const P&) {
         c.policies.clear();
         for (const auto& name : split_list(v)) {
           try {
             c.policies.push_back(parse_policy_kind(name));
           } catch (const ConfigError&) {
             bad(k, "unknown policy '" + name + "' (expected LinTS, LinUCB or LogUCB)");
           }
         }
       }},
      {"policy.alpha", [](RunConfig& c, const std::string& k, const std::string& v, const P&) { c.alpha = parse_real(k, v); }},
      {"policy.lambda", [](RunConfig& c, const std::string& k, const std::string& v, const P&) { c.lambda = parse_real(k, v); }},
      {"policy.seed",
       [](RunConfig& c, const std::string& k, const std::string& v, const P&) {
         c.seed = parse_integer<std::uint64_t>(k, v);
       }},
      {"eval.folds", size(&RunConfig::folds)},
      {"eval.top_k_max", size(&RunConfig::top_k_max)},
      {"features.nmf_rank", size(&RunConfig::nmf_rank)},
      {"features.top_subreddits", size(&RunConfig::top_subreddits)},
      {"features.select_m", size(&RunConfig::select_m)},
      {"data.users", path(&DataConfig::users)},
      {"data.posts", path(&DataConfig::posts)},
      {"data.interactions", path(&DataConfig::interactions)},
      {"data.lexicon", path(&DataConfig::lexicon)},
      {"data.embeddings", path(&DataConfig::embeddings)},
      {"data.empathy_seeds", path(&DataConfig::empathy_seeds)},
      {"data.personality", path(&DataConfig::personality)},
      {"arms.names", [](RunConfig& c, const std::string&, const std::string& v, const P&) { c.arm_names = split_list(v); }},
      {"arms.strategy_map",
       [](RunConfig& c, const std::string&, const std::string& v, const P& base) { c.strategy_map = parse_path(v, base); }},
      {"arms.default_strategy",
       [](RunConfig& c, const std::string&, const std::string& v, const P&) { c.default_strategy = trim(v); }},
      {"synthetic.n_users", syn_size(&SyntheticConfig::n_users)},
      {"synthetic.n_items", syn_size(&SyntheticConfig::n_items)},
      {"synthetic.n_interactions", syn_size(&SyntheticConfig::n_interactions)},
      {"synthetic.d_latent", syn_size(&SyntheticConfig::d_latent)},
      {"synthetic.d_item_latent", syn_size(&SyntheticConfig::d_item_latent)},
      {"synthetic.n_arms", syn_size(&SyntheticConfig::n_arms)},
      {"synthetic.n_subreddits", syn_size(&SyntheticConfig::n_subreddits)},
      {"synthetic.positive_rate_target", syn_real(&SyntheticConfig::positive_rate_target)},
      {"synthetic.reward_surface",
       [](RunConfig& c, const std::string& k, const std::string& v, const P&) {
         try {
           c.synthetic.reward_surface = parse_reward_surface(trim(v));
         } catch (const ConfigError&) {
           bad(k, "expected linear or sigmoid, got '" + v + "'");
         }
       }},
      {"synthetic.logit_scale", syn_real(&SyntheticConfig::logit_scale)},
      {"synthetic.linear_slope", syn_real(&SyntheticConfig::linear_slope)},
      {"synthetic.arm_spread", syn_real(&SyntheticConfig::arm_spread)},
      {"synthetic.intercept",
       [](RunConfig& c, const std::string& k, const std::string& v, const P&) {
         if (trim(v).empty()) {
           c.synthetic.intercept.reset();
         } else {
           c.synthetic.intercept = parse_real(k, v);
         }
       }},
      {"synthetic.seed",
       [](RunConfig& c, const std::string& k, const std::string& v, const P&) {
         c.synthetic.seed = parse_integer<std::uint64_t>(k, v);
       }},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [k, _] : setters()) out.push_back(k);
    return out;
  }();
  return keys;
}

void RunConfig::set(const std::string& key, const std::string& value, const std::filesystem::path& base) {
  for (const auto& [k, setter] : setters()) {
    if (k == key) {
      setter(*this, key, value, base);
      return;
    }
  }
  throw ConfigError(key + ": unknown key");
}

void RunConfig::validate() const {
  if (policies.empty()) bad("policy.name", "at least one policy is required");
  if (!(alpha >= 0.0)) bad("policy.alpha", "must be >= 0");
  if (!(lambda > 0.0)) bad("policy.lambda", "must be > 0");
  if (folds < 2) bad("eval.folds", "must be at least 2");
  if (top_k_max < 1) bad("eval.top_k_max", "must be at least 1");
  if (nmf_rank < 1) bad("features.nmf_rank", "must be at least 1");
  if (top_subreddits < 1) bad("features.top_subreddits", "must be at least 1");
  if (select_m < 1) bad("features.select_m", "must be at least 1");
  ArmCatalog catalog = [&] {
    try {
      return ArmCatalog(arm_names);
    } catch (const ConfigError& e) {
      bad("arms.names", e.what());
    }
  }();
  if (!catalog.contains(default_strategy)) {
    bad("arms.default_strategy", "'" + default_strategy + "' is not one of the arms");
  }
  try {
    synthetic.validate();
  } catch (const ConfigError& e) {
    bad("synthetic", e.what());
  }
  if (synthetic.n_interactions < folds) {
    bad("eval.folds", "exceeds synthetic.n_interactions");
  }
}

ExperimentConfig RunConfig::experiment(int jobs) const {
  ExperimentConfig e;
  e.policies = policies;
  e.alpha = alpha;
  e.lambda = lambda;
  e.seed = seed;
  e.folds = folds;
  e.top_k = top_k_max;
  e.features.nmf_rank = nmf_rank;
  e.features.top_subreddits = top_subreddits;
  e.features.select_m = select_m;
  e.features.seed = seed;
  e.jobs = jobs;
  return e;
}

RunConfig load_config(const std::filesystem::path& path) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(path.string() + ": " + e.message() +
                      (e.line() > 0 ? " (line " + std::to_string(e.line()) + ")" : ""));
  }
  RunConfig cfg;
  const auto base = path.parent_path();
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError(section + ": key outside of a section");
    for (const auto& [name, value] : body) {
      cfg.set(section + "." + name, value.get_value<std::string>(), base);
    }
  }
  return cfg;
}

void apply_seed_env(RunConfig& cfg) {
  if (const char* env = std::getenv(kSeedEnvVar)) {
    try {
      cfg.seed = parse_integer<std::uint64_t>("policy.seed", env);
    } catch (const ConfigError&) {
      throw ConfigError(std::string(kSeedEnvVar) + ": expected a non-negative integer, got '" + env + "'");
    }
  }
}

}  // namespace banditrec
