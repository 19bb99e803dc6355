#pragma once

#include <filesystem>

#include <json.hpp>

#include "banditrec/bandit.hpp"

namespace banditrec {

inline constexpr int kPolicyFormatVersion = 1;

// {"format", "version", "header": {kind, arms, d, alpha, lambda, seed,
// update_count}, "models": [{"A", "A_inv", "b", "update_count"}]} with matrices
// row-major. Doubles are written with round-trip precision.
nlohmann::json policy_to_json(const PolicyState& policy);
PolicyState policy_from_json(const nlohmann::json& doc);

void save_policy(const PolicyState& policy, const std::filesystem::path& path);
PolicyState load_policy(const std::filesystem::path& path);

}  // namespace banditrec
