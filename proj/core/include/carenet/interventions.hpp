#pragma once

#include <cstdint>

#include "carenet/world.hpp"

namespace carenet {

/// Moves `count` distinct individuals, chosen uniformly from the target
/// group (or everyone), into the seed compartment. Throws ConfigError when
/// the target has fewer members than `count`.
void seed_infections(World& world, const SeedingSpec& spec, std::int64_t count, Rng& rng);

/// Moves min(doses, susceptible members of the target) uniformly chosen
/// susceptibles to R as vaccinated. Returns the number moved.
std::int64_t vaccinate(World& world, const VaccinationSpec& spec, Rng& rng);

/// Lockdown rewiring for the groups that `mode` restricts; none is a no-op.
void apply_contact_limit_mode(World& world, ContactLimitMode mode, Rng& rng);

}  // namespace carenet
