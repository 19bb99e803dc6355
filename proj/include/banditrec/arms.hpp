#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace banditrec {

// Dense arm index in [0, arm_count).
using ArmId = std::size_t;

// Names of the strategy arms; ids are positions in the list.
class ArmCatalog {
 public:
  // EmpathicResponding, Distraction, Avoidance, Expression, Relaxation.
  ArmCatalog();
  explicit ArmCatalog(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(ArmId id) const;
  const std::vector<std::string>& names() const { return names_; }

  // Case-insensitive, ignores spaces and underscores ("Empathic Responding"
  // matches EmpathicResponding). Throws ReferentialError when unknown.
  ArmId parse(std::string_view name) const;
  bool contains(std::string_view name) const;

 private:
  std::vector<std::string> names_;
};

}  // namespace banditrec
