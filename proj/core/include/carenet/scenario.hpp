#pragma once

// Scenario configuration: transmission parameters, rates, timeline, mask
// policy, contact limiting, seeding and vaccination.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "carenet/distributions.hpp"
#include "carenet/individual.hpp"
#include "carenet/network.hpp"

namespace carenet {

/// Population of Ottawa; the size at which A0 = 341 applies unscaled.
inline constexpr std::int64_t kReferencePopulation = 994837;

struct TransmissionParams {
  double beta = 0.0112;
  double w_w = 0.473;
  double w_s = 1.0;
  double w_c = 2.27;
  /// Risk multiplier when both parties wear masks.
  double m = 0.34;
  /// Probability of breaking weak contacts when ill.
  double b = 0.92;
  /// Probability of a positive test when ill.
  double tau = 0.04;

  EdgeWeights weights() const { return {w_w, w_s, w_c}; }
  void validate() const;
  friend bool operator==(const TransmissionParams&, const TransmissionParams&) = default;
};

struct RateSet {
  RateConstant nu{1.0};
  RateConstant alpha{0.0769};
  RateConstant eta{0.0186};
  RateConstant mu{0.0163};
  RateConstant rho{0.0652};
  RateConstant zeta{0.0781};
  friend bool operator==(const RateSet&, const RateSet&) = default;
};

enum class MaskMode : std::uint8_t { none = 0, dc, dce, all_star };
std::string_view to_string(MaskMode m);
MaskMode parse_mask_mode(std::string_view name);

/// wears[kind][role]: whether a member of `role` masks on edges of `kind`.
using MaskWearTable = std::array<std::array<bool, kRoleCount>, kEdgeKindCount>;

struct MaskPolicy {
  MaskMode mode = MaskMode::none;
  /// When set, replaces the mode's rule; lets one party mask alone.
  std::optional<MaskWearTable> custom;
  friend bool operator==(const MaskPolicy&, const MaskPolicy&) = default;
};

/// Number of masks (0, 1 or 2) worn on an interaction. Household edges are
/// never masked.
int mask_count(const MaskPolicy& policy, EdgeKind kind, Role a, Role b);

enum class ContactLimitMode : std::uint8_t { none = 0, disabled_only, all_except_essential };
std::string_view to_string(ContactLimitMode m);
ContactLimitMode parse_contact_limit_mode(std::string_view name);
/// Groups that resample weak contacts at lockdown under `mode`.
RoleSet limiting_roles(ContactLimitMode mode);

/// Day 1 is the first recorded case; infections are seeded on day 0.
/// Events on or after end_day are never applied.
struct Timeline {
  int lockdown_day = 44;
  int reopen_day = 148;
  int end_day = 148;
  MaskPolicy before_lockdown{MaskMode::none, std::nullopt};
  MaskPolicy during_lockdown{MaskMode::dce, std::nullopt};
  MaskPolicy after_reopening{MaskMode::all_star, std::nullopt};
  void validate() const;
  friend bool operator==(const Timeline&, const Timeline&) = default;
};

enum class SeedCompartment : std::uint8_t { A, I };

struct SeedingSpec {
  /// Unset: A0 from the calibration formula, scaled by total / kReferencePopulation.
  std::optional<std::int64_t> count;
  /// Unset: uniform over the whole population.
  std::optional<Role> target;
  SeedCompartment compartment = SeedCompartment::A;
  friend bool operator==(const SeedingSpec&, const SeedingSpec&) = default;
};

struct VaccinationSpec {
  std::int64_t doses = 0;
  Role target = Role::caregiver;
  int day = 148;
  friend bool operator==(const VaccinationSpec&, const VaccinationSpec&) = default;
};

/// Values swept by the `compare` command, one list per axis.
struct SweepLists {
  std::vector<std::string> mask_mode;
  std::vector<std::string> limit_mode;
  std::vector<int> pool_size;
  std::vector<std::string> seeding_target;
  std::vector<std::string> vaccination_target;
  std::vector<double> b;
  std::vector<double> m;
  std::vector<double> w_c;
  friend bool operator==(const SweepLists&, const SweepLists&) = default;
};

/// Days of the observed series compared against simulation, inclusive.
struct FitWindow {
  int first_day = 1;
  int last_day = 90;
  friend bool operator==(const FitWindow&, const FitWindow&) = default;
};

/// Target secondary attack rates per contact type.
struct SARTargets {
  double household = 0.20;
  double weak = 0.035;
  double caregiving = 0.378;
  friend bool operator==(const SARTargets&, const SARTargets&) = default;
};

/// Inputs of the calibrate-grid and calibrate-sar commands.
struct CalibrationSettings {
  SARTargets sar;
  int sar_trials = 200000;
  std::vector<double> taus{0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09, 0.10, 0.11};
  std::vector<int> cstars{50, 60, 70, 80, 90};
  int trials_per_cell = 96;
  double min_cases = 250.0;
  int filter_day = 90;
  FitWindow window;
  void validate() const;
  friend bool operator==(const CalibrationSettings&, const CalibrationSettings&) = default;
};

struct ScenarioConfig {
  std::string name = "ottawa";
  /// Upper bound C* of every weak-contact power law.
  int max_contacts = 60;
  PopulationConfig population = PopulationConfig::defaults(60);
  TransmissionParams transmission;
  RateSet rates;
  Timeline timeline;
  ContactLimitMode limit_mode = ContactLimitMode::all_except_essential;
  SeedingSpec seeding;
  std::optional<VaccinationSpec> vaccination;
  /// Use the typeset e^{-lambda} factor when deriving A0.
  bool literal_seed_formula = false;
  SweepLists sweep;
  CalibrationSettings calibration;

  /// Moves every weak power law to the new upper bound, keeping its mean.
  void set_max_contacts(int cstar);
  /// Number of initially infected individuals this scenario seeds.
  std::int64_t resolved_seed_count() const;
  void validate() const;
};

/// Parses the JSON scenario format; missing keys keep their defaults.
ScenarioConfig scenario_from_json_text(std::string_view text);
ScenarioConfig load_scenario(const std::filesystem::path& path);
/// Fully resolved configuration, readable by scenario_from_json_text.
std::string scenario_to_json_text(const ScenarioConfig& config);

}  // namespace carenet
