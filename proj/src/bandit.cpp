#include "banditrec/bandit.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <string>

#include "banditrec/error.hpp"

namespace banditrec {
namespace {

void check_context(const LinearModel& model, const Vector& x) {
  if (static_cast<std::size_t>(x.size()) != model.dim()) {
    throw ContractError("context dimension " + std::to_string(x.size()) +
                        " does not match model dimension " + std::to_string(model.dim()));
  }
  if (!x.allFinite()) throw ContractError("context contains NaN or Inf");
}

Matrix inverse_of(const Matrix& a) {
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("design matrix is not positive definite");
  }
  return llt.solve(Matrix::Identity(a.rows(), a.cols()));
}

}  // namespace

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::LinTS:
      return "LinTS";
    case PolicyKind::LinUCB:
      return "LinUCB";
    case PolicyKind::LogUCB:
      return "LogUCB";
  }
  return "?";
}

PolicyKind parse_policy_kind(std::string_view name) {
  std::string lower;
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "lints") return PolicyKind::LinTS;
  if (lower == "linucb") return PolicyKind::LinUCB;
  if (lower == "logucb") return PolicyKind::LogUCB;
  throw ConfigError("unknown policy '" + std::string(name) + "' (expected LinTS, LinUCB or LogUCB)");
}

LinearModel::LinearModel(std::size_t dim, double diag)
    : design_(Matrix::Identity(dim, dim) * diag),
      inverse_(Matrix::Identity(dim, dim) / diag),
      rewards_(Vector::Zero(dim)),
      theta_(Vector::Zero(dim)) {}

LinearModel LinearModel::from_parts(Matrix design, Matrix inverse, Vector rewards,
                                    std::uint64_t update_count) {
  const auto d = rewards.size();
  if (design.rows() != d || design.cols() != d || inverse.rows() != d || inverse.cols() != d) {
    throw ContractError("inconsistent model dimensions");
  }
  LinearModel m;
  m.design_ = std::move(design);
  m.inverse_ = std::move(inverse);
  m.rewards_ = std::move(rewards);
  m.theta_ = m.inverse_ * m.rewards_;
  m.update_count_ = update_count;
  return m;
}

double LinearModel::mean(const Vector& x) const {
  check_context(*this, x);
  return x.dot(theta_);
}

double LinearModel::variance(const Vector& x) const {
  check_context(*this, x);
  const double v = x.dot(inverse_ * x);
  if (v < 0.0) {
    if (v < -kRadicandTolerance) {
      throw NumericalError("negative confidence radicand " + std::to_string(v));
    }
    return 0.0;
  }
  return v;
}

void LinearModel::update(const Vector& x, double reward) {
  check_context(*this, x);
  const auto d = x.size();
  design_.noalias() += x * x.transpose();
  rewards_ += reward * x;
  ++update_count_;

  if (update_count_ % kRefreshInterval == 0) {
    inverse_ = inverse_of(design_);
  } else {
    const Vector ax = inverse_ * x;
    const double denom = 1.0 + x.dot(ax);
    // Entrywise so the maintained inverse stays exactly symmetric.
    for (Eigen::Index j = 0; j < d; ++j) {
      for (Eigen::Index i = 0; i < d; ++i) {
        inverse_(i, j) -= ax(i) * ax(j) / denom;
      }
    }
  }
  theta_ = inverse_ * rewards_;
  if (sampling_factor_) recompute_sampling_factor();
}

void LinearModel::refresh_inverse() {
  inverse_ = inverse_of(design_);
  theta_ = inverse_ * rewards_;
  if (sampling_factor_) recompute_sampling_factor();
}

void LinearModel::enable_sampling_factor() { recompute_sampling_factor(); }

void LinearModel::recompute_sampling_factor() {
  Eigen::LLT<Matrix> llt(inverse_);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("posterior covariance is not positive definite");
  }
  sampling_factor_ = Matrix(llt.matrixL());
}

const LinearModel& PolicyState::model_for(ArmId arm) const {
  if (arm >= arms) throw ContractError("arm " + std::to_string(arm) + " out of range");
  return kind == PolicyKind::LogUCB ? models.front() : models[arm];
}

LinearModel& PolicyState::model_for(ArmId arm) {
  return const_cast<LinearModel&>(std::as_const(*this).model_for(arm));
}

PolicyState init_policy(PolicyKind kind, std::size_t arms, std::size_t dim, double alpha,
                        double lambda, std::uint64_t seed) {
  if (arms == 0) throw ConfigError("arm count must be at least 1");
  if (dim == 0) throw ConfigError("context dimension must be at least 1");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be positive");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be nonnegative");

  PolicyState p;
  p.kind = kind;
  p.arms = arms;
  p.dim = dim;
  p.alpha = alpha;
  p.lambda = lambda;
  p.seed = seed;
  switch (kind) {
    case PolicyKind::LinUCB:
      p.models.assign(arms, LinearModel(dim, 1.0));
      break;
    case PolicyKind::LinTS:
      p.models.assign(arms, LinearModel(dim, lambda));
      for (auto& m : p.models) m.enable_sampling_factor();
      break;
    case PolicyKind::LogUCB:
      p.models.assign(1, LinearModel(dim, lambda));
      break;
  }
  return p;
}

double linucb_score(const LinearModel& model, const Vector& x, double alpha) {
  const double exploit = model.mean(x);
  if (alpha == 0.0) return exploit;
  return exploit + alpha * std::sqrt(model.variance(x));
}

double lints_score(const LinearModel& model, const Vector& x, const Vector& noise) {
  check_context(model, x);
  if (noise.size() != x.size()) throw ContractError("noise dimension mismatch");
  if (model.sampling_factor()) {
    return x.dot(model.theta() + *model.sampling_factor() * noise);
  }
  Eigen::LLT<Matrix> llt(model.inverse());
  if (llt.info() != Eigen::Success) {
    throw NumericalError("posterior covariance is not positive definite");
  }
  return x.dot(model.theta() + Matrix(llt.matrixL()) * noise);
}

double lints_score(const LinearModel& model, const Vector& x, Rng& rng) {
  Vector noise(static_cast<Eigen::Index>(model.dim()));
  for (Eigen::Index i = 0; i < noise.size(); ++i) noise(i) = rng.normal();
  return lints_score(model, x, noise);
}

double logucb_score(const LinearModel& shared, const Vector& x, double alpha) {
  return linucb_score(shared, x, alpha);
}

double predicted_probability(const LinearModel& shared, const Vector& x) {
  return 1.0 / (1.0 + std::exp(-shared.mean(x)));
}

double score_arm(const PolicyState& policy, ArmId arm, const Vector& x, Rng& rng) {
  const LinearModel& model = policy.model_for(arm);
  switch (policy.kind) {
    case PolicyKind::LinTS:
      return lints_score(model, x, rng);
    case PolicyKind::LinUCB:
      return linucb_score(model, x, policy.alpha);
    case PolicyKind::LogUCB:
      return logucb_score(model, x, policy.alpha);
  }
  return 0.0;
}

double greedy_score(const PolicyState& policy, ArmId arm, const Vector& x) {
  return policy.model_for(arm).mean(x);
}

ArmId select_arm(const PolicyState& policy, std::span<const Vector> contexts, Rng& rng) {
  if (contexts.size() != policy.arms) {
    throw ContractError("expected " + std::to_string(policy.arms) + " contexts, got " +
                        std::to_string(contexts.size()));
  }
  ArmId best = 0;
  double best_score = 0.0;
  for (ArmId a = 0; a < policy.arms; ++a) {
    const double s = score_arm(policy, a, contexts[a], rng);
    if (a == 0 || s > best_score) {
      best = a;
      best_score = s;
    }
  }
  return best;
}

void update(PolicyState& policy, ArmId arm, const Vector& x, int reward) {
  if (reward != 0 && reward != 1) {
    throw ContractError("reward must be 0 or 1, got " + std::to_string(reward));
  }
  policy.model_for(arm).update(x, static_cast<double>(reward));
  ++policy.update_count;
}

std::uint64_t state_fingerprint(const PolicyState& policy) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  auto mix_d = [&](double v) { mix(std::bit_cast<std::uint64_t>(v)); };
  auto mix_all = [&](const auto& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) mix_d(m.data()[i]);
  };
  mix(static_cast<std::uint64_t>(policy.kind));
  mix(policy.arms);
  mix(policy.dim);
  mix_d(policy.alpha);
  mix_d(policy.lambda);
  mix(policy.seed);
  mix(policy.update_count);
  for (const auto& m : policy.models) {
    mix(m.update_count());
    mix_all(m.design());
    mix_all(m.inverse());
    mix_all(m.rewards());
    mix_all(m.theta());
  }
  return h;
}

}  // namespace banditrec
