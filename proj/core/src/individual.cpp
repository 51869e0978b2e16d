#include "carenet/individual.hpp"

#include <string>

#include "carenet/errors.hpp"

namespace carenet {
namespace {

constexpr std::array<std::string_view, kRoleCount> kRoleNames{"disabled", "caregiver",
                                                              "essential", "general"};
constexpr std::array<std::string_view, kCompartmentCount> kCompartmentNames{"S", "E", "A",
                                                                            "I", "H", "R"};

}  // namespace

std::string_view to_string(Role r) { return kRoleNames[index(r)]; }

Role parse_role(std::string_view name) {
  for (Role r : kRoles) {
    if (kRoleNames[index(r)] == name) return r;
  }
  throw ConfigError("unknown subpopulation '" + std::string(name) + "'");
}

std::string_view to_string(Compartment c) { return kCompartmentNames[index(c)]; }

Compartment parse_compartment(std::string_view name) {
  for (std::size_t i = 0; i < kCompartmentCount; ++i) {
    if (kCompartmentNames[i] == name) return static_cast<Compartment>(i);
  }
  throw ConfigError("unknown compartment '" + std::string(name) + "'");
}

}  // namespace carenet
