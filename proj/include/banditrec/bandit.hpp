#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "banditrec/arms.hpp"
#include "banditrec/rng.hpp"

namespace banditrec {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class PolicyKind { LinTS, LinUCB, LogUCB };

std::string_view to_string(PolicyKind kind);
// Throws ConfigError for unknown names. Case-insensitive.
PolicyKind parse_policy_kind(std::string_view name);

// Ridge-regression accumulator shared by all three policies.
//
// Holds A (design matrix), its maintained inverse, the reward vector b and
// theta = A^-1 b. The inverse is kept current with Sherman-Morrison rank-1
// updates and recomputed from A every kRefreshInterval updates.
class LinearModel {
 public:
  static constexpr std::uint64_t kRefreshInterval = 10'000;
  static constexpr double kRadicandTolerance = 1e-12;

  LinearModel() = default;
  // A = diag * I, b = 0.
  LinearModel(std::size_t dim, double diag);

  // Rebuilds a model from persisted parts; theta is recomputed as A_inv * b.
  static LinearModel from_parts(Matrix design, Matrix inverse, Vector rewards,
                                std::uint64_t update_count);

  std::size_t dim() const { return static_cast<std::size_t>(rewards_.size()); }
  const Matrix& design() const { return design_; }
  const Matrix& inverse() const { return inverse_; }
  const Vector& rewards() const { return rewards_; }
  const Vector& theta() const { return theta_; }
  std::uint64_t update_count() const { return update_count_; }

  // x^T theta.
  double mean(const Vector& x) const;
  // x^T A^-1 x, clamped at zero for round-off. Throws NumericalError when it is
  // negative beyond kRadicandTolerance.
  double variance(const Vector& x) const;

  // A += x x^T, b += reward * x, inverse via rank-1 identity, theta = A^-1 b.
  void update(const Vector& x, double reward);

  // Replace the maintained inverse by a fresh inverse of A.
  void refresh_inverse();

  // Lower Cholesky factor of A^-1, kept current only when enabled.
  void enable_sampling_factor();
  const std::optional<Matrix>& sampling_factor() const { return sampling_factor_; }

 private:
  void recompute_sampling_factor();

  Matrix design_;
  Matrix inverse_;
  Vector rewards_;
  Vector theta_;
  std::uint64_t update_count_ = 0;
  std::optional<Matrix> sampling_factor_;
};

// Full state of one contextual bandit policy.
struct PolicyState {
  PolicyKind kind = PolicyKind::LinUCB;
  std::size_t arms = 0;
  std::size_t dim = 0;
  double alpha = 1.0;
  double lambda = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t update_count = 0;
  // One model per arm (LinTS, LinUCB) or a single shared model (LogUCB).
  std::vector<LinearModel> models;

  // The model that scores and learns for `arm`.
  const LinearModel& model_for(ArmId arm) const;
  LinearModel& model_for(ArmId arm);
};

inline constexpr double kDefaultAlpha = 1.0;
inline constexpr double kDefaultLambda = 1.0;

// LinUCB models start at A = I; LinTS and LogUCB at A = lambda * I.
// Throws ConfigError on arms == 0, dim == 0, lambda <= 0 or alpha < 0.
PolicyState init_policy(PolicyKind kind, std::size_t arms, std::size_t dim,
                        double alpha = kDefaultAlpha, double lambda = kDefaultLambda,
                        std::uint64_t seed = 0);

// x^T theta + alpha * sqrt(x^T A^-1 x).
double linucb_score(const LinearModel& model, const Vector& x, double alpha);

// Samples theta ~ N(theta_hat, A^-1) and returns x^T theta.
double lints_score(const LinearModel& model, const Vector& x, Rng& rng);
// Same with an explicit standard-normal draw `noise`.
double lints_score(const LinearModel& model, const Vector& x, const Vector& noise);

// Arm-specific context scored against the shared model; same bound as LinUCB.
double logucb_score(const LinearModel& shared, const Vector& x, double alpha);

// Sigmoid of the exploit term; used only for reporting click probabilities.
double predicted_probability(const LinearModel& shared, const Vector& x);

// Policy's score for one arm. LinTS consumes `rng`.
double score_arm(const PolicyState& policy, ArmId arm, const Vector& x, Rng& rng);

// Exploit-only score: x^T theta of the arm's model (posterior mean for LinTS).
double greedy_score(const PolicyState& policy, ArmId arm, const Vector& x);

// argmax over per-arm scores, ties to the lowest arm id. Needs one context per arm.
ArmId select_arm(const PolicyState& policy, std::span<const Vector> contexts, Rng& rng);

// Applies an observed binary reward. LogUCB updates its shared model whatever the arm.
void update(PolicyState& policy, ArmId arm, const Vector& x, int reward);

// Order-sensitive hash over every number in the state; equal states hash equal.
std::uint64_t state_fingerprint(const PolicyState& policy);

}  // namespace banditrec
