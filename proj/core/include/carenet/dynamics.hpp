#pragma once

// Daily epidemic engine. Each day: pick today's weak caregivers, compute
// infection probabilities from the start-of-day state, advance every
// individual in id order, then apply scheduled events for the new day.

#include <cstdint>

#include "carenet/world.hpp"

namespace carenet {

/// 1 - prod_j (1 - beta w_kind m^{M/2}) over active, contagious contacts
/// that interact today. Throws std::logic_error unless `id` is susceptible.
double infection_probability(const World& world, NodeId id);

/// Same computation from raw parts, for callers without a World.
double infection_probability(const Population& people, const ContactNetwork& net, NodeId id,
                             const MaskPolicy& policy, const TransmissionParams& params);

/// One day of transitions for `id`. Draw order: S one uniform (only when
/// infect_prob > 0); E one; A and I two (the first-listed transition first);
/// H one.
void advance_individual(World& world, NodeId id, double infect_prob, Rng& rng);

/// Moves `id` to `to`, updating edge blocking, documentation and the
/// observer. Used by the engine, seeding and vaccination.
void enter_compartment(World& world, NodeId id, Compartment to);

/// Lockdown, reopening and vaccination scheduled for world.day.
void apply_timeline_events(World& world, Rng& rng);

void step_day(World& world, Rng& rng);

/// Deterministic in (config, seed).
TrialSeries run_trial(const ScenarioConfig& config, std::uint64_t seed);

}  // namespace carenet
