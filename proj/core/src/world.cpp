#include "carenet/world.hpp"

#include <cmath>
#include <numeric>
#include <ostream>

#include "carenet/errors.hpp"

namespace carenet {

std::int64_t GroupTally::size() const {
  return std::accumulate(compartments.begin(), compartments.end(), std::int64_t{0});
}

GroupTally& GroupTally::operator+=(const GroupTally& other) {
  for (std::size_t c = 0; c < kCompartmentCount; ++c) compartments[c] += other.compartments[c];
  documented += other.documented;
  vaccinated += other.vaccinated;
  return *this;
}

GroupTally DayTally::total() const {
  GroupTally sum;
  for (const auto& g : groups) sum += g;
  return sum;
}

GroupTally TrialSeries::at(int day, std::optional<Role> group) const {
  if (day < 0 || static_cast<std::size_t>(day) >= days.size()) {
    throw InputError("day " + std::to_string(day) + " is outside the series");
  }
  const DayTally& row = days[static_cast<std::size_t>(day)];
  return group ? row.group(*group) : row.total();
}

std::vector<double> TrialSeries::documented_cumulative(std::optional<Role> group) const {
  std::vector<double> out;
  out.reserve(days.size());
  for (const auto& row : days) {
    out.push_back(static_cast<double>(group ? row.group(*group).documented : row.total().documented));
  }
  return out;
}

std::vector<double> TrialSeries::infected_cumulative(std::optional<Role> group) const {
  std::vector<double> out;
  out.reserve(days.size());
  for (const auto& row : days) {
    out.push_back(static_cast<double>(group ? row.group(*group).infected() : row.total().infected()));
  }
  return out;
}

void write_trial_csv(std::ostream& out, const TrialSeries& series) {
  out << "day,group,S,E,A,I,H,R,documented_cumulative,infected_cumulative,vaccinated\n";
  const auto row = [&out](int day, std::string_view group, const GroupTally& g) {
    out << day << ',' << group;
    for (auto n : g.compartments) out << ',' << n;
    out << ',' << g.documented << ',' << g.infected() << ',' << g.vaccinated << '\n';
  };
  for (const auto& d : series.days) {
    for (Role r : kRoles) row(d.day, to_string(r), d.group(r));
    row(d.day, "all", d.total());
  }
}

TransmissionTable make_transmission_table(const TransmissionParams& params,
                                          const MaskPolicy& policy) {
  TransmissionTable table{};
  const EdgeWeights weights = params.weights();
  const double one_mask = std::sqrt(params.m);
  for (std::size_t k = 0; k < kEdgeKindCount; ++k) {
    const auto kind = static_cast<EdgeKind>(k);
    for (Role a : kRoles) {
      for (Role b : kRoles) {
        const int masks = mask_count(policy, kind, a, b);
        const double factor = masks == 0 ? 1.0 : masks == 1 ? one_mask : params.m;
        table[k][index(a)][index(b)] = params.beta * weights(kind) * factor;
      }
    }
  }
  return table;
}

void World::set_masks(const MaskPolicy& policy) {
  masks = policy;
  table = make_transmission_table(config.transmission, masks);
}

World build_world(const ScenarioConfig& config, Rng& rng) {
  config.validate();
  World world;
  world.config = config;
  world.people = build_population(config.population, config.transmission.b,
                                  config.transmission.tau, rng);
  world.network = build_network(world.people, config.population, rng);
  world.members = members_by_role(world.people);
  world.set_masks(config.timeline.before_lockdown);
  world.compartment.resize(world.people.size());
  world.role_index.resize(world.people.size());
  for (std::size_t i = 0; i < world.people.size(); ++i) {
    world.compartment[i] = world.people[i].compartment;
    world.role_index[i] = static_cast<std::uint8_t>(index(world.people[i].role));
  }
  world.counts = recount(world);
  world.scratch_escape.assign(world.people.size(), 1.0);
  world.scratch_flag.assign(world.people.size(), 0);
  return world;
}

DayTally tally(const World& world) {
  DayTally row = world.counts;
  row.day = world.day;
  return row;
}

DayTally recount(const World& world) {
  DayTally row;
  row.day = world.day;
  for (const Individual& p : world.people) {
    GroupTally& g = row.groups[index(p.role)];
    ++g.compartments[index(p.compartment)];
    g.documented += p.documented ? 1 : 0;
    g.vaccinated += p.vaccinated ? 1 : 0;
  }
  return row;
}

}  // namespace carenet
