#include "banditrec/arms.hpp"

#include <algorithm>
#include <cctype>

#include "banditrec/error.hpp"

namespace banditrec {
namespace {

std::string normalized(std::string_view name) {
  std::string out;
  for (char c : name) {
    if (c == ' ' || c == '_' || c == '-') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

ArmCatalog::ArmCatalog()
    : names_{"EmpathicResponding", "Distraction", "Avoidance", "Expression", "Relaxation"} {}

ArmCatalog::ArmCatalog(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw ConfigError("arm catalog must contain at least one arm");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (normalized(names_[i]) == normalized(names_[j])) {
        throw ConfigError("duplicate arm name '" + names_[i] + "'");
      }
    }
  }
}

const std::string& ArmCatalog::name(ArmId id) const {
  if (id >= names_.size()) {
    throw ReferentialError("arm id " + std::to_string(id) + " out of range");
  }
  return names_[id];
}

bool ArmCatalog::contains(std::string_view name) const {
  const std::string key = normalized(name);
  return std::any_of(names_.begin(), names_.end(),
                     [&](const std::string& n) { return normalized(n) == key; });
}

ArmId ArmCatalog::parse(std::string_view name) const {
  const std::string key = normalized(name);
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (normalized(names_[i]) == key) return i;
  }
  throw ReferentialError("unknown strategy '" + std::string(name) + "'");
}

}  // namespace banditrec
