#include "carenet/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include "carenet/errors.hpp"

namespace carenet {

std::string_view to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::weak: return "weak";
    case EdgeKind::strong: return "strong";
    case EdgeKind::caregiver_weak: return "caregiver_weak";
    case EdgeKind::caregiver_strong: return "caregiver_strong";
  }
  return "?";
}

// --- ContactNetwork ---------------------------------------------------------

ContactNetwork::ContactNetwork(std::size_t node_count)
    : adjacency_(node_count),
      weak_degree_(node_count, 0),
      blocking_(node_count, kBlocksNothing),
      pools_(node_count),
      strong_caregiver_(node_count, kNoNode),
      todays_caregiver_(node_count, kNoNode) {}

std::optional<EdgeKind> ContactNetwork::edge_between(NodeId a, NodeId b) const {
  const auto& shorter = adjacency_[a].size() <= adjacency_[b].size() ? adjacency_[a] : adjacency_[b];
  const NodeId other = &shorter == &adjacency_[a] ? b : a;
  for (const Contact& c : shorter) {
    if (c.neighbor == other) return c.kind;
  }
  return std::nullopt;
}

bool ContactNetwork::add_edge(NodeId a, NodeId b, EdgeKind kind) {
  if (a == b || connected(a, b)) return false;
  adjacency_[a].push_back({b, kind});
  adjacency_[b].push_back({a, kind});
  if (kind == EdgeKind::weak) {
    ++weak_degree_[a];
    ++weak_degree_[b];
  }
  ++edge_count_;
  return true;
}

bool ContactNetwork::remove_edge(NodeId a, NodeId b) {
  const auto drop = [](std::vector<Contact>& list, NodeId target) -> std::optional<EdgeKind> {
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i].neighbor == target) {
        const EdgeKind kind = list[i].kind;
        list[i] = list.back();
        list.pop_back();
        return kind;
      }
    }
    return std::nullopt;
  };
  const auto kind = drop(adjacency_[a], b);
  if (!kind) return false;
  drop(adjacency_[b], a);
  if (*kind == EdgeKind::weak) {
    --weak_degree_[a];
    --weak_degree_[b];
  }
  --edge_count_;
  return true;
}

void ContactNetwork::set_caregiver_pool(NodeId disabled, std::vector<NodeId> pool) {
  pools_[disabled] = std::move(pool);
  const auto it = std::lower_bound(pool_owners_.begin(), pool_owners_.end(), disabled);
  const bool listed = it != pool_owners_.end() && *it == disabled;
  if (pools_[disabled].empty() && listed) {
    pool_owners_.erase(it);
  } else if (!pools_[disabled].empty() && !listed) {
    pool_owners_.insert(it, disabled);
  }
}

void ContactNetwork::set_strong_caregiver(NodeId disabled, NodeId caregiver) {
  strong_caregiver_[disabled] = caregiver;
}

void ContactNetwork::set_todays_caregiver(NodeId disabled, NodeId caregiver) {
  todays_caregiver_[disabled] = caregiver;
}

// --- population -------------------------------------------------------------

PopulationConfig PopulationConfig::defaults(int max_contacts) {
  PopulationConfig c;
  const auto law = [max_contacts](double mu) -> DistributionSpec {
    return PowerLawSpec::with_mean(0, max_contacts, mu);
  };
  c.weak[index(Role::essential)] = {law(21.37), law(21.37)};
  c.weak[index(Role::general)] = {law(10.34), law(7.08)};
  c.weak[index(Role::disabled)] = {law(10.34), law(7.08)};
  c.weak[index(Role::caregiver)] = {law(5.14), law(4.0)};
  c.strong = EmpiricalSpec({0.283, 0.332, 0.155, 0.148, 0.0816});
  c.pool = DeterministicSpec(10);
  return c;
}

void PopulationConfig::validate() const {
  if (total <= 0) throw ConfigError("population total must be positive");
  double sum = 0.0;
  for (double f : fractions) {
    if (!(f >= 0.0)) throw ConfigError("subpopulation fractions must be nonnegative");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "subpopulation fractions sum to " << sum << ", not 1";
    throw ConfigError(msg.str());
  }
}

std::array<std::int64_t, kRoleCount> group_counts(const PopulationConfig& config) {
  config.validate();
  std::array<std::int64_t, kRoleCount> counts{};
  std::array<double, kRoleCount> remainder{};
  std::int64_t assigned = 0;
  for (std::size_t r = 0; r < kRoleCount; ++r) {
    const double exact = config.fractions[r] * static_cast<double>(config.total);
    counts[r] = static_cast<std::int64_t>(std::floor(exact));
    remainder[r] = exact - std::floor(exact);
    assigned += counts[r];
  }
  std::array<std::size_t, kRoleCount> order{};
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; assigned < config.total; i = (i + 1) % kRoleCount) {
    ++counts[order[i]];
    ++assigned;
  }
  return counts;
}

Population build_population(const PopulationConfig& config, double break_prob,
                            double test_prob, Rng& rng) {
  const auto counts = group_counts(config);
  std::vector<Role> roles;
  roles.reserve(static_cast<std::size_t>(config.total));
  for (Role r : kRoles) roles.insert(roles.end(), static_cast<std::size_t>(counts[index(r)]), r);
  shuffle(std::span<Role>(roles), rng);

  Population people(roles.size());
  for (std::size_t i = 0; i < people.size(); ++i) {
    people[i].role = roles[i];
    people[i].breaks_weak_when_ill = bernoulli(rng, break_prob);
    people[i].tests_positive_when_ill = bernoulli(rng, test_prob);
  }
  return people;
}

std::array<std::vector<NodeId>, kRoleCount> members_by_role(const Population& people) {
  std::array<std::vector<NodeId>, kRoleCount> out;
  for (std::size_t i = 0; i < people.size(); ++i) {
    out[index(people[i].role)].push_back(static_cast<NodeId>(i));
  }
  return out;
}

// --- construction -----------------------------------------------------------

std::vector<NodeId> assign_weak_stubs(const Population& people, const ContactNetwork& net,
                                      const PopulationConfig& config, Period period, Rng& rng,
                                      const RoleSet& roles) {
  std::vector<NodeId> stubs;
  for (std::size_t i = 0; i < people.size(); ++i) {
    const Role role = people[i].role;
    if (!roles[index(role)]) continue;
    const int target = sample(config.weak_spec(role, period), rng);
    const int needed = target - net.weak_degree(static_cast<NodeId>(i));
    if (needed > 0) stubs.insert(stubs.end(), static_cast<std::size_t>(needed), static_cast<NodeId>(i));
  }
  return stubs;
}

std::vector<std::vector<NodeId>> build_household_units(std::size_t node_count,
                                                       const DistributionSpec& strong, Rng& rng) {
  // A shuffled list read front to back is a sequence of uniform draws
  // without replacement from the unassigned ids.
  std::vector<NodeId> ids(node_count);
  std::iota(ids.begin(), ids.end(), NodeId{0});
  shuffle(std::span<NodeId>(ids), rng);

  std::vector<std::vector<NodeId>> units;
  std::size_t next = 0;
  while (next < ids.size()) {
    const NodeId first = ids[next++];
    const auto house = static_cast<std::size_t>(sample(strong, rng));
    const std::size_t take = std::min(house, ids.size() - next);
    std::vector<NodeId> unit;
    unit.reserve(take + 1);
    unit.push_back(first);
    unit.insert(unit.end(), ids.begin() + static_cast<std::ptrdiff_t>(next),
                ids.begin() + static_cast<std::ptrdiff_t>(next + take));
    next += take;
    units.push_back(std::move(unit));
  }
  return units;
}

void match_weak_stubs(ContactNetwork& net, std::vector<NodeId> stubs, Rng& rng) {
  shuffle(std::span<NodeId>(stubs), rng);
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
    net.add_edge(stubs[i], stubs[i + 1], EdgeKind::weak);
  }
}

void connect_households(ContactNetwork& net, const std::vector<std::vector<NodeId>>& units) {
  for (const auto& unit : units) {
    for (std::size_t i = 0; i < unit.size(); ++i) {
      for (std::size_t j = i + 1; j < unit.size(); ++j) {
        net.add_edge(unit[i], unit[j], EdgeKind::strong);
      }
    }
  }
}

void assign_caregivers(ContactNetwork& net, const Population& people,
                       const DistributionSpec& pool_size, Rng& rng) {
  const auto groups = members_by_role(people);
  const auto& disabled = groups[index(Role::disabled)];
  const auto& caregivers = groups[index(Role::caregiver)];
  if (disabled.empty()) return;
  if (caregivers.empty()) throw ConfigError("disabled individuals need at least one caregiver");

  std::vector<NodeId> pool;
  for (NodeId d : disabled) {
    const int k = sample(pool_size, rng);
    if (static_cast<std::size_t>(k) > caregivers.size()) {
      throw ConfigError("caregiver pool size " + std::to_string(k) + " exceeds the " +
                        std::to_string(caregivers.size()) + " available caregivers");
    }
    // Rejection sampling without replacement; pools are tiny relative to
    // the caregiver population.
    pool.clear();
    while (pool.size() < static_cast<std::size_t>(k)) {
      const NodeId c = caregivers[uniform_below(rng, caregivers.size())];
      if (std::find(pool.begin(), pool.end(), c) == pool.end()) pool.push_back(c);
    }
    for (NodeId c : pool) net.add_edge(d, c, EdgeKind::caregiver_weak);
    net.set_caregiver_pool(d, pool);
  }
  for (NodeId d : disabled) {
    const NodeId c = caregivers[uniform_below(rng, caregivers.size())];
    net.set_strong_caregiver(d, c);
    net.add_edge(d, c, EdgeKind::caregiver_strong);
  }
}

ContactNetwork build_network(const Population& people, const PopulationConfig& config,
                             Rng& rng) {
  ContactNetwork net(people.size());
  auto stubs = assign_weak_stubs(people, net, config, Period::pre_lockdown, rng);
  const auto units = build_household_units(people.size(), config.strong, rng);
  match_weak_stubs(net, std::move(stubs), rng);
  connect_households(net, units);
  assign_caregivers(net, people, config.pool, rng);
  return net;
}

// --- rewiring ---------------------------------------------------------------

void apply_lockdown(ContactNetwork& net, const Population& people,
                    const PopulationConfig& config, Rng& rng, const RoleSet& limiting) {
  constexpr int kNotLimiting = -1;
  std::vector<int> targets(people.size(), kNotLimiting);
  for (std::size_t i = 0; i < people.size(); ++i) {
    const Role role = people[i].role;
    if (limiting[index(role)]) targets[i] = sample(config.weak_spec(role, Period::lockdown), rng);
  }

  std::vector<NodeId> weak;
  for (std::size_t i = 0; i < people.size(); ++i) {
    if (targets[i] == kNotLimiting) continue;
    const auto id = static_cast<NodeId>(i);
    const int clear = net.weak_degree(id) - targets[i];
    for (int attempt = 0; attempt < clear; ++attempt) {
      weak.clear();
      for (const Contact& c : net.contacts(id)) {
        if (c.kind == EdgeKind::weak) weak.push_back(c.neighbor);
      }
      if (weak.empty()) break;
      const NodeId other = weak[uniform_below(rng, weak.size())];
      if (people[i].role != Role::essential && people[other].role != Role::essential) {
        net.remove_edge(id, other);
      }
    }
  }
}

void apply_reopening(ContactNetwork& net, const Population& people,
                     const PopulationConfig& config, Rng& rng) {
  auto stubs = assign_weak_stubs(people, net, config, Period::pre_lockdown, rng);
  match_weak_stubs(net, std::move(stubs), rng);
}

void select_daily_caregivers(ContactNetwork& net, Rng& rng) {
  for (NodeId id : net.pool_owners()) {
    const auto pool = net.caregiver_pool(id);
    net.set_todays_caregiver(id, pool[uniform_below(rng, pool.size())]);
  }
}

void write_edge_list_csv(std::ostream& out, const ContactNetwork& net,
                         const EdgeWeights& weights) {
  out << "id_a,id_b,kind,active,weight\n";
  for (std::size_t i = 0; i < net.node_count(); ++i) {
    const auto a = static_cast<NodeId>(i);
    for (const Contact& c : net.contacts(a)) {
      if (c.neighbor < a) continue;
      out << a << ',' << c.neighbor << ',' << to_string(c.kind) << ','
          << (net.is_active(a, c) ? 1 : 0) << ',' << weights(c.kind) << '\n';
    }
  }
}

}  // namespace carenet
