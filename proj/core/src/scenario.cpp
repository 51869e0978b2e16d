#include "carenet/scenario.hpp"

#include <cmath>
#include <string>

#include "carenet/calibration.hpp"
#include "carenet/errors.hpp"

namespace carenet {

void TransmissionParams::validate() const {
  if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("beta must lie in (0, 1)");
  if (w_s != 1.0) throw ConfigError("household weight w_s is fixed at 1");
  if (!(w_w > 0.0) || !(w_c > 0.0)) throw ConfigError("edge weights must be positive");
  if (!(m > 0.0 && m <= 1.0)) throw ConfigError("mask factor m must lie in (0, 1]");
  if (!(b >= 0.0 && b <= 1.0)) throw ConfigError("break probability b must lie in [0, 1]");
  if (!(tau >= 0.0 && tau <= 1.0)) throw ConfigError("test probability tau must lie in [0, 1]");
  if (beta * std::max({w_w, w_s, w_c}) > 1.0) {
    throw ConfigError("beta times the largest edge weight exceeds 1");
  }
}

std::string_view to_string(MaskMode m) {
  switch (m) {
    case MaskMode::none: return "none";
    case MaskMode::dc: return "dc";
    case MaskMode::dce: return "dce";
    case MaskMode::all_star: return "all_star";
  }
  return "?";
}

MaskMode parse_mask_mode(std::string_view name) {
  for (MaskMode m : {MaskMode::none, MaskMode::dc, MaskMode::dce, MaskMode::all_star}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("unknown mask mode '" + std::string(name) + "'");
}

int mask_count(const MaskPolicy& policy, EdgeKind kind, Role a, Role b) {
  if (kind == EdgeKind::strong) return 0;
  if (policy.custom) {
    const auto& wears = (*policy.custom)[static_cast<std::size_t>(kind)];
    return int{wears[index(a)]} + int{wears[index(b)]};
  }
  const bool caregiving = is_caregiving(kind);
  const bool essential = a == Role::essential || b == Role::essential;
  switch (policy.mode) {
    case MaskMode::none: return 0;
    case MaskMode::dc: return caregiving ? 2 : 0;
    case MaskMode::dce: return caregiving || essential ? 2 : 0;
    case MaskMode::all_star: return 2;
  }
  return 0;
}

std::string_view to_string(ContactLimitMode m) {
  switch (m) {
    case ContactLimitMode::none: return "none";
    case ContactLimitMode::disabled_only: return "disabled_only";
    case ContactLimitMode::all_except_essential: return "all_except_essential";
  }
  return "?";
}

ContactLimitMode parse_contact_limit_mode(std::string_view name) {
  for (ContactLimitMode m : {ContactLimitMode::none, ContactLimitMode::disabled_only,
                             ContactLimitMode::all_except_essential}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("unknown contact-limit mode '" + std::string(name) + "'");
}

RoleSet limiting_roles(ContactLimitMode mode) {
  switch (mode) {
    case ContactLimitMode::none: return {false, false, false, false};
    case ContactLimitMode::disabled_only: return {true, false, false, false};
    case ContactLimitMode::all_except_essential: return kAllRoles;
  }
  return {};
}

void Timeline::validate() const {
  if (!(0 < lockdown_day && lockdown_day < reopen_day && reopen_day <= end_day)) {
    throw ConfigError("timeline requires 0 < lockdown_day < reopen_day <= end_day");
  }
}

void ScenarioConfig::set_max_contacts(int cstar) {
  if (cstar <= 0) throw ConfigError("max_contacts must be positive");
  for (auto& by_period : population.weak) {
    for (auto& spec : by_period) {
      if (auto* law = std::get_if<PowerLawSpec>(&spec)) spec = law->with_upper_bound(cstar);
    }
  }
  max_contacts = cstar;
}

std::int64_t ScenarioConfig::resolved_seed_count() const {
  if (seeding.count) return *seeding.count;
  const auto full = initial_asymptomatic_count(transmission.tau, rates.alpha.per_day(),
                                               rates.eta.per_day(), literal_seed_formula);
  return std::llround(static_cast<double>(full) * static_cast<double>(population.total) /
                      static_cast<double>(kReferencePopulation));
}

void CalibrationSettings::validate() const {
  if (sar_trials < 1) throw ConfigError("sar_trials must be at least 1");
  if (trials_per_cell < 1) throw ConfigError("trials_per_cell must be at least 1");
  if (taus.empty() || cstars.empty()) throw ConfigError("calibration grid must not be empty");
  for (double t : taus) {
    if (!(t > 0.0 && t < 1.0)) throw ConfigError("grid tau values must lie in (0, 1)");
  }
  for (int c : cstars) {
    if (c < 1) throw ConfigError("grid C* values must be positive");
  }
  if (window.first_day < 1 || window.last_day < window.first_day) {
    throw ConfigError("fit window must satisfy 1 <= first_day <= last_day");
  }
  if (filter_day < 0) throw ConfigError("filter_day must be nonnegative");
}

void ScenarioConfig::validate() const {
  population.validate();
  transmission.validate();
  timeline.validate();
  if (seeding.count && *seeding.count < 0) throw ConfigError("seed count must be nonnegative");
  if (vaccination) {
    if (vaccination->doses < 0) throw ConfigError("vaccine doses must be nonnegative");
    if (vaccination->day < 1) throw ConfigError("vaccination day must be at least 1");
  }
  calibration.validate();
}

}  // namespace carenet
