#include "banditrec/policy_io.hpp"

#include <fstream>

#include "banditrec/error.hpp"

namespace banditrec {
namespace {

nlohmann::json row_major(const Matrix& m) {
  auto out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  }
  return out;
}

Matrix matrix_from(const nlohmann::json& values, std::size_t d, const char* what) {
  if (!values.is_array() || values.size() != d * d) {
    throw StateError(std::string("policy file: '") + what + "' must hold d*d numbers");
  }
  Matrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) m(i, j) = values[i * d + j].get<double>();
  }
  return m;
}

}  // namespace

nlohmann::json policy_to_json(const PolicyState& policy) {
  nlohmann::json doc;
  doc["format"] = "banditrec-policy";
  doc["version"] = kPolicyFormatVersion;
  doc["header"] = {{"kind", std::string(to_string(policy.kind))},
                   {"arms", policy.arms},
                   {"d", policy.dim},
                   {"alpha", policy.alpha},
                   {"lambda", policy.lambda},
                   {"seed", policy.seed},
                   {"update_count", policy.update_count}};
  auto models = nlohmann::json::array();
  for (const auto& m : policy.models) {
    models.push_back({{"A", row_major(m.design())},
                      {"A_inv", row_major(m.inverse())},
                      {"b", std::vector<double>(m.rewards().begin(), m.rewards().end())},
                      {"update_count", m.update_count()}});
  }
  doc["models"] = std::move(models);
  return doc;
}

PolicyState policy_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("format") != "banditrec-policy") throw StateError("not a policy file");
    if (doc.at("version").get<int>() != kPolicyFormatVersion) {
      throw StateError("unsupported policy file version");
    }
    const auto& h = doc.at("header");
    PolicyState p = init_policy(parse_policy_kind(h.at("kind").get<std::string>()),
                                h.at("arms").get<std::size_t>(), h.at("d").get<std::size_t>(),
                                h.at("alpha").get<double>(), h.at("lambda").get<double>(),
                                h.at("seed").get<std::uint64_t>());
    p.update_count = h.at("update_count").get<std::uint64_t>();
    const auto& models = doc.at("models");
    if (models.size() != p.models.size()) throw StateError("policy file: wrong model count");
    for (std::size_t i = 0; i < models.size(); ++i) {
      const auto& jm = models[i];
      const auto b = jm.at("b").get<std::vector<double>>();
      if (b.size() != p.dim) throw StateError("policy file: 'b' has wrong length");
      p.models[i] = LinearModel::from_parts(matrix_from(jm.at("A"), p.dim, "A"),
                                            matrix_from(jm.at("A_inv"), p.dim, "A_inv"),
                                            Eigen::Map<const Vector>(b.data(), b.size()),
                                            jm.at("update_count").get<std::uint64_t>());
      if (p.kind == PolicyKind::LinTS) p.models[i].enable_sampling_factor();
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw StateError(std::string("malformed policy file: ") + e.what());
  }
}

void save_policy(const PolicyState& policy, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << policy_to_json(policy).dump(1) << '\n';
}

PolicyState load_policy(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StateError("missing policy file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw StateError("malformed policy file " + path.string() + ": " + e.what());
  }
  return policy_from_json(doc);
}

}  // namespace banditrec
