#include "banditrec/synthetic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <string>

#include <fmt/format.h>

#include "banditrec/error.hpp"

namespace banditrec {
namespace {

constexpr std::int64_t kEpoch = 1'600'000'000;
constexpr double kCalibrationTolerance = 0.02;
constexpr int kBisectionSteps = 100;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double surface_probability(RewardSurface surface, double scaled_signal, double intercept) {
  if (surface == RewardSurface::Sigmoid) return sigmoid(scaled_signal + intercept);
  return std::clamp(intercept + scaled_signal, 0.0, 1.0);
}

ArmCatalog synthetic_arms(std::size_t n) {
  const ArmCatalog defaults;
  std::vector<std::string> names;
  for (std::size_t a = 0; a < n; ++a) {
    names.push_back(a < defaults.size() && n <= defaults.size() ? defaults.name(a)
                                                                 : fmt::format("Arm{}", a));
  }
  return ArmCatalog(std::move(names));
}

std::string padded(char prefix, std::size_t i, std::size_t n) {
  const auto width = std::to_string(n > 0 ? n - 1 : 0).size();
  return fmt::format("{}{:0{}}", prefix, i, width);
}

}  // namespace

std::string_view to_string(RewardSurface s) {
  return s == RewardSurface::Linear ? "linear" : "sigmoid";
}

RewardSurface parse_reward_surface(std::string_view name) {
  std::string lower;
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "linear") return RewardSurface::Linear;
  if (lower == "sigmoid") return RewardSurface::Sigmoid;
  throw ConfigError("unknown reward surface '" + std::string(name) + "' (expected linear or sigmoid)");
}

void SyntheticConfig::validate() const {
  if (n_users == 0) throw ConfigError("synthetic.n_users must be at least 1");
  if (n_items == 0) throw ConfigError("synthetic.n_items must be at least 1");
  if (n_interactions > n_users * n_items) {
    throw ConfigError("synthetic.n_interactions exceeds the number of distinct user-item pairs");
  }
  if (d_latent + d_item_latent == 0) throw ConfigError("synthetic.d_latent must be at least 1");
  if (!(positive_rate_target > 0.0 && positive_rate_target < 1.0)) {
    throw ConfigError("synthetic.positive_rate_target must lie in (0, 1)");
  }
  if (n_arms == 0) throw ConfigError("synthetic.n_arms must be at least 1");
  if (n_subreddits == 0) throw ConfigError("synthetic.n_subreddits must be at least 1");
  if (!(arm_spread >= 0.0 && arm_spread <= 1.0)) throw ConfigError("synthetic.arm_spread must lie in [0, 1]");
  if (!(logit_scale >= 0.0) || !(linear_slope >= 0.0)) {
    throw ConfigError("synthetic signal scales must be nonnegative");
  }
}

double SyntheticTruth::probability(const Vector& x, ArmId arm) const {
  if (arm >= theta.size()) throw ContractError("arm out of range");
  if (x.size() != theta[arm].size()) throw ContractError("context dimension mismatch");
  return surface_probability(surface, scale * x.dot(theta[arm]), intercept);
}

ArmId SyntheticTruth::best_arm(const Vector& x) const {
  ArmId best = 0;
  double best_p = probability(x, 0);
  for (ArmId a = 1; a < theta.size(); ++a) {
    const double p = probability(x, a);
    if (p > best_p) {
      best = a;
      best_p = p;
    }
  }
  return best;
}

Vector SyntheticTruth::generating_context(const UserRecord& user, const ItemRecord& item) const {
  Vector x(static_cast<Eigen::Index>(user.latent.size() + item.latent.size()));
  Eigen::Index k = 0;
  for (double v : user.latent) x(k++) = v;
  for (double v : item.latent) x(k++) = v;
  return x;
}

SyntheticData generate_synthetic(const SyntheticConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);

  const ArmCatalog arms = synthetic_arms(cfg.n_arms);
  StrategyMap mapping(arms, 0);
  std::vector<std::string> subreddits;
  for (std::size_t s = 0; s < cfg.n_subreddits; ++s) {
    subreddits.push_back(fmt::format("sub{:02}", s));
    mapping.assign(subreddits.back(), s % cfg.n_arms);
  }

  Dataset ds;
  ds.arms = arms;
  for (std::size_t u = 0; u < cfg.n_users; ++u) {
    UserRecord user;
    user.id = padded('u', u, cfg.n_users);
    for (std::size_t k = 0; k < cfg.d_latent; ++k) user.latent.push_back(rng.normal());
    user.karma = std::llround(std::exp(5.0 + 1.5 * rng.normal()));
    const std::size_t n_subs = 1 + rng.below(std::min<std::size_t>(3, cfg.n_subreddits));
    std::set<std::size_t> picked;
    while (picked.size() < n_subs) picked.insert(rng.below(cfg.n_subreddits));
    for (std::size_t s : picked) user.subreddits.push_back(subreddits[s]);
    ds.users.push_back(std::move(user));
  }
  for (std::size_t i = 0; i < cfg.n_items; ++i) {
    ItemRecord item;
    item.id = padded('p', i, cfg.n_items);
    for (std::size_t k = 0; k < cfg.d_item_latent; ++k) item.latent.push_back(rng.normal());
    item.subreddit = subreddits[rng.below(cfg.n_subreddits)];
    item.strategy = map_item_strategy(item, mapping);
    item.score = static_cast<std::int64_t>(rng.below(500));
    item.upvote_ratio = 0.5 + 0.5 * rng.uniform();
    item.num_comments = static_cast<std::int64_t>(rng.below(50));
    item.created = kEpoch - static_cast<std::int64_t>(rng.below(30 * 86400));
    ds.items.push_back(std::move(item));
  }

  SyntheticTruth truth;
  truth.surface = cfg.reward_surface;
  truth.scale = cfg.reward_surface == RewardSurface::Sigmoid ? cfg.logit_scale : cfg.linear_slope;
  const auto dim = static_cast<Eigen::Index>(cfg.d_latent + cfg.d_item_latent);
  const double sd = 1.0 / std::sqrt(static_cast<double>(dim));
  Vector common(dim);
  for (Eigen::Index k = 0; k < dim; ++k) common(k) = sd * rng.normal();
  const double keep = std::sqrt(1.0 - cfg.arm_spread * cfg.arm_spread);
  for (std::size_t a = 0; a < cfg.n_arms; ++a) {
    Vector own(dim);
    for (Eigen::Index k = 0; k < dim; ++k) own(k) = sd * rng.normal();
    truth.theta.push_back(keep * common + cfg.arm_spread * own);
  }

  std::set<std::pair<std::size_t, std::size_t>> used;
  for (std::size_t t = 0; t < cfg.n_interactions; ++t) {
    std::pair<std::size_t, std::size_t> pair;
    do {
      pair = {rng.below(cfg.n_users), rng.below(cfg.n_items)};
    } while (!used.insert(pair).second);
    ds.interactions.push_back({pair.first, pair.second, 0, kEpoch + 60 * static_cast<std::int64_t>(t)});
  }

  std::vector<double> uniforms(ds.interactions.size());
  std::vector<double> signal(ds.interactions.size());
  for (std::size_t t = 0; t < ds.interactions.size(); ++t) {
    const auto& x = ds.interactions[t];
    uniforms[t] = rng.uniform();
    const auto& item = ds.items[x.item];
    signal[t] = truth.scale * truth.generating_context(ds.users[x.user], item).dot(truth.theta[item.strategy]);
  }
  auto rate_at = [&](double c) {
    std::size_t pos = 0;
    for (std::size_t t = 0; t < uniforms.size(); ++t) {
      pos += uniforms[t] < surface_probability(cfg.reward_surface, signal[t], c) ? 1 : 0;
    }
    return uniforms.empty() ? 0.0 : static_cast<double>(pos) / static_cast<double>(uniforms.size());
  };

  if (cfg.intercept) {
    truth.intercept = *cfg.intercept;
  } else {
    double lo = -50.0, hi = 50.0;
    for (int step = 0; step < kBisectionSteps; ++step) {
      const double mid = 0.5 * (lo + hi);
      (rate_at(mid) < cfg.positive_rate_target ? lo : hi) = mid;
    }
    const double err_lo = std::abs(rate_at(lo) - cfg.positive_rate_target);
    const double err_hi = std::abs(rate_at(hi) - cfg.positive_rate_target);
    truth.intercept = err_lo < err_hi ? lo : hi;
    if (std::min(err_lo, err_hi) > kCalibrationTolerance) {
      throw GenerationError(fmt::format(
          "could not calibrate positive rate to {} within {} after {} bisection steps",
          cfg.positive_rate_target, kCalibrationTolerance, kBisectionSteps));
    }
  }
  for (std::size_t t = 0; t < ds.interactions.size(); ++t) {
    ds.interactions[t].response =
        uniforms[t] < surface_probability(cfg.reward_surface, signal[t], truth.intercept) ? 1 : 0;
  }

  ds.reindex();
  ds.normalize_interactions();
  ds.collect_user_texts();
  return {std::move(ds), std::move(truth), std::move(mapping)};
}

PlantedEnvironment::PlantedEnvironment(SyntheticTruth truth, std::uint64_t seed)
    : truth_(std::move(truth)), rng_(seed) {}

Vector PlantedEnvironment::next_context() {
  Vector x(static_cast<Eigen::Index>(truth_.dim()));
  for (Eigen::Index k = 0; k < x.size(); ++k) x(k) = rng_.normal();
  return x;
}

int PlantedEnvironment::draw_reward(const Vector& x, ArmId arm) {
  return rng_.bernoulli(truth_.probability(x, arm)) ? 1 : 0;
}

double RegretTrace::average_at(std::size_t t) const {
  if (t == 0 || t > per_round.size()) throw ContractError("checkpoint out of range");
  double sum = 0.0;
  for (std::size_t i = 0; i < t; ++i) sum += per_round[i];
  return sum / static_cast<double>(t);
}

double RegretTrace::mean_over(std::size_t first, std::size_t last) const {
  if (first >= last || last > per_round.size()) throw ContractError("bad regret window");
  double sum = 0.0;
  for (std::size_t i = first; i < last; ++i) sum += per_round[i];
  return sum / static_cast<double>(last - first);
}

RegretTrace run_online(PolicyState& policy, PlantedEnvironment& env, std::size_t rounds, Rng& rng) {
  const auto& truth = env.truth();
  if (policy.dim != truth.dim() || policy.arms != truth.theta.size()) {
    throw ContractError("policy shape does not match the planted environment");
  }
  RegretTrace trace;
  trace.per_round.reserve(rounds);
  std::vector<Vector> contexts(policy.arms);
  for (std::size_t t = 0; t < rounds; ++t) {
    const Vector x = env.next_context();
    for (auto& c : contexts) c = x;
    const ArmId chosen = select_arm(policy, contexts, rng);
    const double best = truth.probability(x, truth.best_arm(x));
    trace.per_round.push_back(best - truth.probability(x, chosen));
    update(policy, chosen, x, env.draw_reward(x, chosen));
  }
  return trace;
}

}  // namespace banditrec
