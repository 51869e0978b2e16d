#pragma once

// Mutable state of one trial and the per-day tallies it produces.

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "carenet/individual.hpp"
#include "carenet/network.hpp"
#include "carenet/scenario.hpp"

namespace carenet {

struct GroupTally {
  std::array<std::int64_t, kCompartmentCount> compartments{};
  std::int64_t documented = 0;
  std::int64_t vaccinated = 0;

  std::int64_t size() const;
  std::int64_t count(Compartment c) const { return compartments[index(c)]; }
  /// Everyone who has left S through infection.
  std::int64_t infected() const { return size() - count(Compartment::S) - vaccinated; }
  GroupTally& operator+=(const GroupTally& other);
  friend bool operator==(const GroupTally&, const GroupTally&) = default;
};

struct DayTally {
  int day = 0;
  std::array<GroupTally, kRoleCount> groups{};
  GroupTally total() const;
  const GroupTally& group(Role r) const { return groups[index(r)]; }
  friend bool operator==(const DayTally&, const DayTally&) = default;
};

/// Row 0 is the seeded state on day 0; row d is the state at the end of day d.
struct TrialSeries {
  std::uint64_t seed = 0;
  std::vector<DayTally> days;

  int last_day() const { return days.empty() ? -1 : days.back().day; }
  /// Tally for one group, or the whole population when `group` is unset.
  GroupTally at(int day, std::optional<Role> group = std::nullopt) const;
  std::vector<double> documented_cumulative(std::optional<Role> group = std::nullopt) const;
  std::vector<double> infected_cumulative(std::optional<Role> group = std::nullopt) const;
  friend bool operator==(const TrialSeries&, const TrialSeries&) = default;
};

/// Columns: day,group,S,E,A,I,H,R,documented_cumulative,infected_cumulative,vaccinated.
/// One row per day and group, plus a group `all` row.
void write_trial_csv(std::ostream& out, const TrialSeries& series);

/// Per-edge transmission probability beta * w_kind * m^{M/2}, indexed by
/// [kind][role of susceptible][role of contagious contact].
using TransmissionTable =
    std::array<std::array<std::array<double, kRoleCount>, kRoleCount>, kEdgeKindCount>;
TransmissionTable make_transmission_table(const TransmissionParams& params,
                                          const MaskPolicy& policy);

using TransitionObserver = std::function<void(NodeId, Compartment from, Compartment to)>;

struct World {
  ScenarioConfig config;
  Population people;
  ContactNetwork network;
  std::array<std::vector<NodeId>, kRoleCount> members;
  /// Dense copies of each person's compartment and role for the hot loops;
  /// enter_compartment keeps them in step with `people`.
  std::vector<Compartment> compartment;
  std::vector<std::uint8_t> role_index;
  /// Running counts, updated on every transition.
  DayTally counts;
  int day = 0;
  MaskPolicy masks;
  TransmissionTable table{};
  /// Whether the lockdown changed any contacts (reopening only follows a rewiring lockdown).
  bool lockdown_rewired = false;
  /// Called on every compartment change; empty by default.
  TransitionObserver observer;

  void set_masks(const MaskPolicy& policy);

  // Reused across days to avoid reallocating.
  std::vector<double> scratch_escape;
  std::vector<NodeId> scratch_marked;
  std::vector<std::uint8_t> scratch_flag;
};

/// Population and network construction (population flags first, then the
/// network), with day-0 masks in force. Seeds nothing.
World build_world(const ScenarioConfig& config, Rng& rng);

/// Current counts, O(1).
DayTally tally(const World& world);
/// Counts by a full pass over the population.
DayTally recount(const World& world);

}  // namespace carenet
