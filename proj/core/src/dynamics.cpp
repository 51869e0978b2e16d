#include "carenet/dynamics.hpp"

#include <stdexcept>

#include "carenet/interventions.hpp"

namespace carenet {
namespace {

double not_infected_product(const Population& people, const ContactNetwork& net, NodeId id,
                            const TransmissionTable& table) {
  const std::size_t self_role = index(people[id].role);
  double not_get = 1.0;
  for (const Contact& c : net.contacts(id)) {
    const Individual& other = people[c.neighbor];
    if (!is_contagious(other.compartment)) continue;
    if (!net.is_active(id, c) || !net.interacts_today(id, c)) continue;
    not_get *= 1.0 - table[static_cast<std::size_t>(c.kind)][self_role][index(other.role)];
  }
  return not_get;
}

void require_susceptible(const Individual& person) {
  if (person.compartment != Compartment::S) {
    throw std::logic_error("infection probability requested for a non-susceptible individual");
  }
}

bool within_day(RateConstant rate, Rng& rng) {
  return sample_exponential(rate, uniform01(rng)) < 1.0;
}

}  // namespace

double infection_probability(const World& world, NodeId id) {
  require_susceptible(world.people[id]);
  return 1.0 - not_infected_product(world.people, world.network, id, world.table);
}

double infection_probability(const Population& people, const ContactNetwork& net, NodeId id,
                             const MaskPolicy& policy, const TransmissionParams& params) {
  require_susceptible(people[id]);
  return 1.0 - not_infected_product(people, net, id, make_transmission_table(params, policy));
}

void enter_compartment(World& world, NodeId id, Compartment to) {
  Individual& person = world.people[id];
  const Compartment from = person.compartment;
  GroupTally& group = world.counts.groups[world.role_index[id]];
  --group.compartments[index(from)];
  ++group.compartments[index(to)];
  person.compartment = to;
  world.compartment[id] = to;
  person.entered_day = world.day;
  const auto document = [&] {
    if (!person.documented) ++group.documented;
    person.documented = true;
  };
  switch (to) {
    case Compartment::I:
      if (person.breaks_weak_when_ill) world.network.set_blocking(id, kBlocksWeakLike);
      if (person.tests_positive_when_ill) document();
      break;
    case Compartment::H:
      world.network.set_blocking(id, kBlocksAll);
      document();
      break;
    case Compartment::R:
      world.network.set_blocking(id, kBlocksNothing);
      break;
    default:
      break;
  }
  if (world.observer) world.observer(id, from, to);
}

void advance_individual(World& world, NodeId id, double infect_prob, Rng& rng) {
  const RateSet& rates = world.config.rates;
  switch (world.people[id].compartment) {
    case Compartment::S:
      if (infect_prob > 0.0 && uniform01(rng) < infect_prob) {
        enter_compartment(world, id, Compartment::E);
      }
      break;
    case Compartment::E:
      if (within_day(rates.nu, rng)) enter_compartment(world, id, Compartment::A);
      break;
    case Compartment::A: {
      const double t_ill = sample_exponential(rates.alpha, uniform01(rng));
      const double t_removed = sample_exponential(rates.eta, uniform01(rng));
      if (t_ill <= t_removed) {
        if (t_ill < 1.0) enter_compartment(world, id, Compartment::I);
      } else if (t_removed < 1.0) {
        enter_compartment(world, id, Compartment::R);
      }
      break;
    }
    case Compartment::I: {
      const double t_hospital = sample_exponential(rates.mu, uniform01(rng));
      const double t_removed = sample_exponential(rates.rho, uniform01(rng));
      if (t_hospital <= t_removed) {
        if (t_hospital < 1.0) enter_compartment(world, id, Compartment::H);
      } else if (t_removed < 1.0) {
        enter_compartment(world, id, Compartment::R);
      }
      break;
    }
    case Compartment::H:
      if (within_day(rates.zeta, rng)) enter_compartment(world, id, Compartment::R);
      break;
    case Compartment::R:
      break;
  }
}

void apply_timeline_events(World& world, Rng& rng) {
  const ScenarioConfig& config = world.config;
  const Timeline& t = config.timeline;
  if (world.day >= t.end_day) return;
  if (world.day == t.lockdown_day) {
    world.set_masks(t.during_lockdown);
    apply_contact_limit_mode(world, config.limit_mode, rng);
  }
  if (world.day == t.reopen_day) {
    world.set_masks(t.after_reopening);
    if (world.lockdown_rewired) apply_reopening(world.network, world.people, config.population, rng);
  }
  if (config.vaccination && world.day == config.vaccination->day) {
    vaccinate(world, *config.vaccination, rng);
  }
}

void step_day(World& world, Rng& rng) {
  ContactNetwork& net = world.network;
  const std::size_t n = world.people.size();
  if (world.scratch_escape.size() != n) world.scratch_escape.assign(n, 1.0);
  if (world.scratch_flag.size() != n) world.scratch_flag.assign(n, 0);
  const auto& comp = world.compartment;

  select_daily_caregivers(net, rng);

  // Phase 1: each contagious individual multiplies its escape factor into
  // every susceptible it interacts with today. The product over a
  // susceptible's contagious contacts is its probability of not being infected.
  auto& marked = world.scratch_marked;
  marked.clear();
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_contagious(comp[i])) continue;
    const auto id = static_cast<NodeId>(i);
    const std::size_t source_role = world.role_index[i];
    for (const Contact& c : net.contacts(id)) {
      const NodeId k = c.neighbor;
      if (comp[k] != Compartment::S) continue;
      if (!net.is_active(id, c) || !net.interacts_today(id, c)) continue;
      if (!world.scratch_flag[k]) {
        world.scratch_flag[k] = 1;
        marked.push_back(k);
      }
      world.scratch_escape[k] *=
          1.0 - world.table[static_cast<std::size_t>(c.kind)][world.role_index[k]][source_role];
    }
  }

  // Phase 2.
  for (std::size_t i = 0; i < n; ++i) {
    const Compartment c = comp[i];
    if (c == Compartment::R) continue;
    if (c == Compartment::S && !world.scratch_flag[i]) continue;
    advance_individual(world, static_cast<NodeId>(i), 1.0 - world.scratch_escape[i], rng);
  }
  for (NodeId id : marked) {
    world.scratch_flag[id] = 0;
    world.scratch_escape[id] = 1.0;
  }

  ++world.day;
  apply_timeline_events(world, rng);
}

TrialSeries run_trial(const ScenarioConfig& config, std::uint64_t seed) {
  Rng rng(seed);
  World world = build_world(config, rng);
  seed_infections(world, config.seeding, config.resolved_seed_count(), rng);
  TrialSeries series;
  series.seed = seed;
  series.days.reserve(static_cast<std::size_t>(config.timeline.end_day) + 1);
  series.days.push_back(tally(world));
  while (world.day < config.timeline.end_day) {
    step_day(world, rng);
    series.days.push_back(tally(world));
  }
  return series;
}

}  // namespace carenet
