#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace carenet {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

enum class Role : std::uint8_t { disabled = 0, caregiver = 1, essential = 2, general = 3 };
inline constexpr std::size_t kRoleCount = 4;
inline constexpr std::array<Role, kRoleCount> kRoles{Role::disabled, Role::caregiver,
                                                     Role::essential, Role::general};

constexpr std::size_t index(Role r) { return static_cast<std::size_t>(r); }
std::string_view to_string(Role r);
/// Throws ConfigError on an unknown name.
Role parse_role(std::string_view name);

/// Disease compartment. Allowed moves: S->E->A, A->{I,R}, I->{H,R}, H->R.
enum class Compartment : std::uint8_t { S = 0, E, A, I, H, R };
inline constexpr std::size_t kCompartmentCount = 6;

constexpr std::size_t index(Compartment c) { return static_cast<std::size_t>(c); }
std::string_view to_string(Compartment c);
Compartment parse_compartment(std::string_view name);

constexpr bool is_contagious(Compartment c) {
  return c == Compartment::A || c == Compartment::I;
}

/// One agent. Role and the two behaviour flags are drawn once at
/// construction; `documented` only ever flips false -> true.
struct Individual {
  Role role = Role::general;
  bool breaks_weak_when_ill = false;
  bool tests_positive_when_ill = false;
  Compartment compartment = Compartment::S;
  bool documented = false;
  bool vaccinated = false;
  std::int32_t entered_day = 0;  // day of the last compartment change
};

using Population = std::vector<Individual>;

/// Role membership flags, used to restrict interventions to some groups.
using RoleSet = std::array<bool, kRoleCount>;
inline constexpr RoleSet kAllRoles{true, true, true, true};

}  // namespace carenet
