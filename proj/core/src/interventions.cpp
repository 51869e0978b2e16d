#include "carenet/interventions.hpp"

#include <algorithm>
#include <numeric>

#include "carenet/dynamics.hpp"
#include "carenet/errors.hpp"

namespace carenet {
namespace {

// First k entries become a uniform sample without replacement.
void partial_shuffle(std::vector<NodeId>& ids, std::size_t k, Rng& rng) {
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_below(rng, ids.size() - i));
    std::swap(ids[i], ids[j]);
  }
}

}  // namespace

void seed_infections(World& world, const SeedingSpec& spec, std::int64_t count, Rng& rng) {
  if (count < 0) throw ConfigError("seed count must be nonnegative");
  if (count == 0) return;
  std::vector<NodeId> candidates;
  if (spec.target) {
    candidates = world.members[index(*spec.target)];
  } else {
    candidates.resize(world.people.size());
    std::iota(candidates.begin(), candidates.end(), NodeId{0});
  }
  const auto k = static_cast<std::size_t>(count);
  if (k > candidates.size()) {
    throw ConfigError("cannot seed " + std::to_string(count) + " infections in a target of " +
                      std::to_string(candidates.size()));
  }
  partial_shuffle(candidates, k, rng);
  const Compartment to = spec.compartment == SeedCompartment::A ? Compartment::A : Compartment::I;
  for (std::size_t i = 0; i < k; ++i) enter_compartment(world, candidates[i], to);
}

std::int64_t vaccinate(World& world, const VaccinationSpec& spec, Rng& rng) {
  if (spec.doses <= 0) return 0;
  std::vector<NodeId> susceptible;
  for (NodeId id : world.members[index(spec.target)]) {
    if (world.people[id].compartment == Compartment::S) susceptible.push_back(id);
  }
  const auto k = std::min(static_cast<std::size_t>(spec.doses), susceptible.size());
  partial_shuffle(susceptible, k, rng);
  for (std::size_t i = 0; i < k; ++i) {
    world.people[susceptible[i]].vaccinated = true;
    ++world.counts.groups[index(spec.target)].vaccinated;
    enter_compartment(world, susceptible[i], Compartment::R);
  }
  return static_cast<std::int64_t>(k);
}

void apply_contact_limit_mode(World& world, ContactLimitMode mode, Rng& rng) {
  if (mode == ContactLimitMode::none) return;
  apply_lockdown(world.network, world.people, world.config.population, rng, limiting_roles(mode));
  world.lockdown_rewired = true;
}

}  // namespace carenet
