#pragma once

// Typed contact network and the construction / rewiring procedures that
// build it: weak-stub matching, household cliques, caregiver pools, and the
// lockdown and reopening rewiring steps.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "carenet/distributions.hpp"
#include "carenet/individual.hpp"
#include "carenet/rng.hpp"

namespace carenet {

enum class EdgeKind : std::uint8_t { weak = 0, strong, caregiver_weak, caregiver_strong };
inline constexpr std::size_t kEdgeKindCount = 4;

std::string_view to_string(EdgeKind k);

constexpr bool is_caregiving(EdgeKind k) {
  return k == EdgeKind::caregiver_weak || k == EdgeKind::caregiver_strong;
}
/// Weak and caregiver_weak edges break when a flagged individual falls ill.
constexpr bool is_weak_like(EdgeKind k) {
  return k == EdgeKind::weak || k == EdgeKind::caregiver_weak;
}

/// Which edges an individual's illness currently suppresses.
enum Blocking : std::uint8_t {
  kBlocksNothing = 0,
  kBlocksWeakLike = 1,
  kBlocksStrongLike = 2,
  kBlocksAll = kBlocksWeakLike | kBlocksStrongLike,
};

enum class Period : std::uint8_t { pre_lockdown = 0, lockdown = 1 };

struct Contact {
  NodeId neighbor;
  EdgeKind kind;
  friend bool operator==(const Contact&, const Contact&) = default;
};

struct EdgeWeights {
  double weak = 1.0;
  double strong = 1.0;
  double caregiving = 1.0;
  double operator()(EdgeKind k) const {
    if (k == EdgeKind::weak) return weak;
    if (k == EdgeKind::strong) return strong;
    return caregiving;
  }
};

/// Undirected multi-type contact graph over dense ids [0, n).
///
/// At most one edge joins any pair. An edge is active unless either
/// endpoint's Blocking covers its kind, so activity is symmetric and
/// reactivation on recovery needs no bookkeeping beyond the blocking state.
class ContactNetwork {
 public:
  ContactNetwork() = default;
  explicit ContactNetwork(std::size_t node_count);

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  std::span<const Contact> contacts(NodeId id) const { return adjacency_[id]; }
  std::optional<EdgeKind> edge_between(NodeId a, NodeId b) const;
  bool connected(NodeId a, NodeId b) const { return edge_between(a, b).has_value(); }

  /// Adds the edge unless a == b or the pair is already connected.
  bool add_edge(NodeId a, NodeId b, EdgeKind kind);
  bool remove_edge(NodeId a, NodeId b);

  int degree(NodeId id) const { return static_cast<int>(adjacency_[id].size()); }
  int weak_degree(NodeId id) const { return weak_degree_[id]; }

  std::uint8_t blocking(NodeId id) const { return blocking_[id]; }
  void set_blocking(NodeId id, std::uint8_t mask) { blocking_[id] = mask; }

  bool is_active(NodeId a, NodeId b, EdgeKind kind) const {
    const std::uint8_t bit = is_weak_like(kind) ? kBlocksWeakLike : kBlocksStrongLike;
    return ((blocking_[a] | blocking_[b]) & bit) == 0;
  }
  bool is_active(NodeId from, const Contact& c) const {
    return is_active(from, c.neighbor, c.kind);
  }

  /// Caregiver_weak edges carry an interaction only when the disabled
  /// endpoint drew that caregiver today; every other kind interacts daily.
  bool interacts_today(NodeId from, const Contact& c) const {
    if (c.kind != EdgeKind::caregiver_weak) return true;
    return todays_caregiver_[from] == c.neighbor || todays_caregiver_[c.neighbor] == from;
  }

  std::span<const NodeId> caregiver_pool(NodeId disabled) const { return pools_[disabled]; }
  void set_caregiver_pool(NodeId disabled, std::vector<NodeId> pool);
  /// Ids with a nonempty pool, ascending.
  std::span<const NodeId> pool_owners() const { return pool_owners_; }
  NodeId strong_caregiver(NodeId disabled) const { return strong_caregiver_[disabled]; }
  void set_strong_caregiver(NodeId disabled, NodeId caregiver);
  NodeId todays_caregiver(NodeId disabled) const { return todays_caregiver_[disabled]; }
  void set_todays_caregiver(NodeId disabled, NodeId caregiver);

  friend bool operator==(const ContactNetwork&, const ContactNetwork&) = default;

 private:
  std::vector<std::vector<Contact>> adjacency_;
  std::vector<std::int32_t> weak_degree_;
  std::vector<std::uint8_t> blocking_;
  std::vector<std::vector<NodeId>> pools_;
  std::vector<NodeId> pool_owners_;
  std::vector<NodeId> strong_caregiver_;
  std::vector<NodeId> todays_caregiver_;
  std::size_t edge_count_ = 0;
};

/// Population composition and the contact-count distributions.
struct PopulationConfig {
  std::int64_t total = 994837;
  /// Indexed by Role.
  std::array<double, kRoleCount> fractions{0.073, 0.021, 0.1472, 0.7588};
  /// Weak-contact targets, [role][period].
  std::array<std::array<DistributionSpec, 2>, kRoleCount> weak{};
  DistributionSpec strong{DeterministicSpec(0)};
  DistributionSpec pool{DeterministicSpec(10)};

  /// Ottawa defaults: household table, pool of 10, and power laws on
  /// [0, max_contacts] with the fitted group means.
  static PopulationConfig defaults(int max_contacts = 60);

  const DistributionSpec& weak_spec(Role r, Period p) const {
    return weak[index(r)][static_cast<std::size_t>(p)];
  }
  void validate() const;
};

/// Individuals per role: largest-remainder rounding of fraction * total.
std::array<std::int64_t, kRoleCount> group_counts(const PopulationConfig& config);

/// Roles are laid out by a random permutation; each individual then draws its
/// break flag (prob. break_prob) and test flag (prob. test_prob), in id order.
Population build_population(const PopulationConfig& config, double break_prob,
                            double test_prob, Rng& rng);

/// Ids of each role, ascending.
std::array<std::vector<NodeId>, kRoleCount> members_by_role(const Population& people);

/// Each selected individual draws a target from its group's weak
/// distribution for `period` and contributes max(0, target - current) stubs.
std::vector<NodeId> assign_weak_stubs(const Population& people, const ContactNetwork& net,
                                      const PopulationConfig& config, Period period, Rng& rng,
                                      const RoleSet& roles = kAllRoles);

/// Random partition of [0, node_count) into household units. Each unit is a
/// random seed id plus `house` more ids (house ~ strong), truncated when the
/// unassigned pool runs out.
std::vector<std::vector<NodeId>> build_household_units(std::size_t node_count,
                                                       const DistributionSpec& strong, Rng& rng);

/// Uniform random pairing of stubs; self-pairs and already-connected pairs
/// are discarded. An odd leftover stub is dropped.
void match_weak_stubs(ContactNetwork& net, std::vector<NodeId> stubs, Rng& rng);

/// Strong clique per unit, skipping pairs that are already contacts.
void connect_households(ContactNetwork& net, const std::vector<std::vector<NodeId>>& units);

/// Pools of distinct weak caregivers plus one strong caregiver per disabled
/// individual. Pairs that are already contacts get no new edge.
void assign_caregivers(ContactNetwork& net, const Population& people,
                       const DistributionSpec& pool_size, Rng& rng);

/// Lockdown rewiring for the individuals in `limiting`.
void apply_lockdown(ContactNetwork& net, const Population& people,
                    const PopulationConfig& config, Rng& rng,
                    const RoleSet& limiting = kAllRoles);

/// Restores pre-lockdown targets by matching fresh stubs; never removes edges.
void apply_reopening(ContactNetwork& net, const Population& people,
                     const PopulationConfig& config, Rng& rng);

void select_daily_caregivers(ContactNetwork& net, Rng& rng);

/// Full construction: weak stubs, household units, weak matching, household
/// cliques, caregivers (in that draw order).
ContactNetwork build_network(const Population& people, const PopulationConfig& config,
                             Rng& rng);

/// Edge list: id_a,id_b,kind,active,weight (one row per undirected edge, id_a < id_b).
void write_edge_list_csv(std::ostream& out, const ContactNetwork& net,
                         const EdgeWeights& weights);

}  // namespace carenet
