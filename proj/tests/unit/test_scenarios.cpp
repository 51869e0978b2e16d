#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <set>

#include "carenet/calibration.hpp"
#include "carenet/dynamics.hpp"
#include "carenet/errors.hpp"
#include "carenet/experiment.hpp"
#include "carenet/interventions.hpp"
#include "carenet/scenario.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace carenet {
namespace {

using testing::kPropertySeed;

constexpr std::array<MaskMode, 4> kModes{MaskMode::none, MaskMode::dc, MaskMode::dce,
                                         MaskMode::all_star};

// --- masks -------------------------------------------------------------------

TEST(MaskCount, PolicyExamples) {
  const MaskPolicy dce{MaskMode::dce, {}};
  EXPECT_EQ(mask_count(dce, EdgeKind::weak, Role::general, Role::essential), 2);
  EXPECT_EQ(mask_count(dce, EdgeKind::weak, Role::general, Role::general), 0);
  EXPECT_EQ(mask_count(dce, EdgeKind::caregiver_weak, Role::disabled, Role::caregiver), 2);
  for (Role a : kRoles) {
    for (Role b : kRoles) {
      EXPECT_EQ(mask_count({MaskMode::all_star, {}}, EdgeKind::strong, a, b), 0);
    }
  }
  EXPECT_EQ(mask_count({MaskMode::dc, {}}, EdgeKind::caregiver_strong, Role::disabled,
                       Role::caregiver), 2);
  EXPECT_EQ(mask_count({MaskMode::dc, {}}, EdgeKind::weak, Role::disabled, Role::caregiver), 0);
}

TEST(MaskCount, MatchesVerbalDefinitionsSymmetricAndNested) {
  for (std::size_t k = 0; k < kEdgeKindCount; ++k) {
    const auto kind = static_cast<EdgeKind>(k);
    for (Role a : kRoles) {
      for (Role b : kRoles) {
        int previous = 0;
        for (MaskMode mode : kModes) {
          const int m = mask_count({mode, {}}, kind, a, b);
          EXPECT_EQ(m, mask_count({mode, {}}, kind, b, a));
          EXPECT_EQ(m, int{testing::oracle_wears_mask(mode, kind, a, b)} +
                           int{testing::oracle_wears_mask(mode, kind, b, a)});
          EXPECT_GE(m, previous) << to_string(mode);
          previous = m;
        }
      }
    }
  }
}

TEST(MaskCount, CustomTableAllowsOneMask) {
  MaskWearTable wears{};
  wears[static_cast<std::size_t>(EdgeKind::weak)][index(Role::essential)] = true;
  wears[static_cast<std::size_t>(EdgeKind::strong)][index(Role::essential)] = true;
  const MaskPolicy p{MaskMode::none, wears};
  EXPECT_EQ(mask_count(p, EdgeKind::weak, Role::essential, Role::general), 1);
  EXPECT_EQ(mask_count(p, EdgeKind::weak, Role::essential, Role::essential), 2);
  EXPECT_EQ(mask_count(p, EdgeKind::strong, Role::essential, Role::essential), 0);
}

TEST(LimitModes, RolesRestricted) {
  EXPECT_EQ(limiting_roles(ContactLimitMode::none), (RoleSet{false, false, false, false}));
  EXPECT_EQ(limiting_roles(ContactLimitMode::disabled_only), (RoleSet{true, false, false, false}));
  EXPECT_TRUE(limiting_roles(ContactLimitMode::all_except_essential)[index(Role::general)]);
  EXPECT_EQ(parse_contact_limit_mode("disabled_only"), ContactLimitMode::disabled_only);
  EXPECT_THROW(parse_contact_limit_mode("some"), ConfigError);
  EXPECT_EQ(parse_mask_mode("all_star"), MaskMode::all_star);
  EXPECT_THROW(parse_mask_mode("everyone"), ConfigError);
}

// --- seeding and vaccination -------------------------------------------------

ScenarioConfig sized(std::int64_t n) {
  ScenarioConfig c;
  c.population.total = n;
  c.seeding.count = 0;
  return c;
}

World world_of(std::int64_t n, std::uint64_t seed) {
  Rng rng(seed);
  return build_world(sized(n), rng);
}

TEST(Seeding, UniformCountDistinctIndividuals) {
  World w = world_of(20000, 1);
  Rng rng(2);
  std::vector<NodeId> seeded;
  w.observer = [&](NodeId id, Compartment, Compartment) { seeded.push_back(id); };
  seed_infections(w, SeedingSpec{}, 341, rng);
  EXPECT_EQ(tally(w).total().count(Compartment::A), 341);
  EXPECT_EQ(tally(w).total().count(Compartment::S), 20000 - 341);
  EXPECT_EQ(std::set<NodeId>(seeded.begin(), seeded.end()).size(), 341u);
}

TEST(Seeding, TargetGroupAndCompartment) {
  World w = world_of(20000, 1);
  Rng rng(2);
  SeedingSpec spec;
  spec.target = Role::caregiver;
  spec.compartment = SeedCompartment::I;
  seed_infections(w, spec, 50, rng);
  EXPECT_EQ(tally(w).group(Role::caregiver).count(Compartment::I), 50);
  EXPECT_EQ(tally(w).total().count(Compartment::I), 50);
}

TEST(Seeding, ZeroAndTooMany) {
  World w = world_of(1000, 1);
  Rng rng(2);
  seed_infections(w, SeedingSpec{}, 0, rng);
  EXPECT_EQ(tally(w).total().count(Compartment::S), 1000);
  SeedingSpec spec;
  spec.target = Role::caregiver;
  EXPECT_THROW(seed_infections(w, spec, 22, rng), ConfigError);
}

TEST(Seeding, ResolvedCountScalesWithPopulation) {
  ScenarioConfig c;
  EXPECT_EQ(c.resolved_seed_count(), 341);
  c.population.total = 100'000;
  EXPECT_EQ(c.resolved_seed_count(), 34);
  c.population.total = kReferencePopulation;
  c.literal_seed_formula = true;
  EXPECT_EQ(c.resolved_seed_count(), 34);
  c.seeding.count = 7;
  EXPECT_EQ(c.resolved_seed_count(), 7);
}

TEST(Vaccination, MovesRequestedDosesOnlyFromSusceptibleTarget) {
  World w = world_of(200'000, 3);
  Rng rng(4);
  // Some caregivers are already infected.
  for (std::size_t i = 0; i < 100; ++i) {
    enter_compartment(w, w.members[index(Role::caregiver)][i], Compartment::A);
  }
  const auto susceptible = tally(w).group(Role::caregiver).count(Compartment::S);
  const std::int64_t doses = susceptible / 2;
  EXPECT_EQ(vaccinate(w, {doses, Role::caregiver, 1}, rng), doses);
  const GroupTally g = tally(w).group(Role::caregiver);
  EXPECT_EQ(g.vaccinated, doses);
  EXPECT_EQ(g.count(Compartment::R), doses);
  EXPECT_EQ(g.count(Compartment::A), 100);
  EXPECT_EQ(g.infected(), 100);
  EXPECT_EQ(tally(w), recount(w));
}

TEST(Vaccination, ShortfallVaccinatesWholeGroupAndNoOneElse) {
  World w = world_of(20000, 3);
  Rng rng(4);
  const auto group = static_cast<std::int64_t>(w.members[index(Role::caregiver)].size());
  EXPECT_EQ(vaccinate(w, {10151, Role::caregiver, 1}, rng), group);
  EXPECT_EQ(tally(w).group(Role::caregiver).count(Compartment::S), 0);
  EXPECT_EQ(tally(w).total().vaccinated, group);
  EXPECT_EQ(vaccinate(w, {0, Role::general, 1}, rng), 0);
  EXPECT_EQ(tally(w).group(Role::general).vaccinated, 0);
}

TEST(Vaccination, VaccinatedStayRemovedThroughTrial) {
  ScenarioConfig c = sized(5000);
  c.seeding.count = 30;
  c.timeline.lockdown_day = 5;
  c.timeline.reopen_day = 10;
  c.timeline.end_day = 40;
  c.vaccination = VaccinationSpec{400, Role::general, 8};
  Rng rng(11);
  World w = build_world(c, rng);
  seed_infections(w, c.seeding, 30, rng);
  std::vector<NodeId> vaccinated;
  while (w.day < c.timeline.end_day) {
    step_day(w, rng);
    if (vaccinated.empty() && w.day >= 8) {
      for (std::size_t i = 0; i < w.people.size(); ++i) {
        if (w.people[i].vaccinated) vaccinated.push_back(static_cast<NodeId>(i));
      }
      ASSERT_EQ(vaccinated.size(), 400u);
    }
    for (NodeId id : vaccinated) ASSERT_EQ(w.people[id].compartment, Compartment::R);
  }
}

// --- contact limiting ---------------------------------------------------------

std::array<double, kRoleCount> mean_weak(const World& w) {
  std::array<double, kRoleCount> out{};
  for (Role r : kRoles) {
    double sum = 0;
    for (NodeId id : w.members[index(r)]) sum += w.network.weak_degree(id);
    out[index(r)] = sum / static_cast<double>(w.members[index(r)].size());
  }
  return out;
}

TEST(LimitModes, NoneLeavesNetworkIdentical) {
  World w = world_of(20000, 5);
  const ContactNetwork before = w.network;
  Rng rng(6);
  apply_contact_limit_mode(w, ContactLimitMode::none, rng);
  EXPECT_TRUE(w.network == before);
  EXPECT_FALSE(w.lockdown_rewired);
}

TEST(LimitModes, DisabledOnlyDropsDisabledDegree) {
  World w = world_of(100'000, 5);
  const auto before = mean_weak(w);
  Rng rng(6);
  apply_contact_limit_mode(w, ContactLimitMode::disabled_only, rng);
  const auto after = mean_weak(w);
  EXPECT_LT(after[index(Role::disabled)], before[index(Role::disabled)] - 2.0);
  // Others lose only the edges they shared with disabled individuals.
  for (Role r : {Role::caregiver, Role::essential, Role::general}) {
    EXPECT_NEAR(after[index(r)], before[index(r)], 0.05 * before[index(r)]) << to_string(r);
  }
  EXPECT_DOUBLE_EQ(after[index(Role::essential)], before[index(Role::essential)]);
}

// Removal is per individual, and each removal also lowers a partner's degree,
// so limited groups end well below their lockdown means (about 4.1 and 1.9).
TEST(LimitModes, AllExceptEssentialDropsEveryoneElse) {
  World w = world_of(100'000, 5);
  const auto before = mean_weak(w);
  Rng rng(6);
  apply_contact_limit_mode(w, ContactLimitMode::all_except_essential, rng);
  const auto after = mean_weak(w);
  EXPECT_TRUE(w.lockdown_rewired);
  EXPECT_DOUBLE_EQ(after[index(Role::essential)], before[index(Role::essential)]);
  EXPECT_LT(after[index(Role::general)], 7.08 + 0.5);
  EXPECT_LT(after[index(Role::caregiver)], 4.0 + 0.5);
  EXPECT_LT(after[index(Role::general)], before[index(Role::general)]);
}

// --- configuration -----------------------------------------------------------

TEST(ScenarioJson, RoundTripsEveryField) {
  Rng rng(kPropertySeed);
  for (int i = 0; i < 40; ++i) {
    ScenarioConfig c = testing::random_small_scenario(rng);
    c.sweep.b = {0.5, 0.92};
    c.sweep.mask_mode = {"none", "dce"};
    c.calibration.taus = {0.03, 0.04};
    MaskWearTable wears{};
    wears[1][2] = true;
    c.timeline.before_lockdown.custom = wears;
    const ScenarioConfig back = scenario_from_json_text(scenario_to_json_text(c));
    EXPECT_EQ(scenario_to_json_text(back), scenario_to_json_text(c));
    EXPECT_EQ(back.population.total, c.population.total);
    EXPECT_EQ(back.transmission, c.transmission);
    EXPECT_EQ(back.timeline, c.timeline);
    EXPECT_EQ(back.vaccination, c.vaccination);
    EXPECT_EQ(back.seeding, c.seeding);
    EXPECT_EQ(back.sweep, c.sweep);
    EXPECT_EQ(back.calibration, c.calibration);
  }
}

TEST(ScenarioJson, EmptyObjectGivesDefaults) {
  const ScenarioConfig c = scenario_from_json_text("{}");
  const ScenarioConfig d;
  EXPECT_EQ(c.transmission, d.transmission);
  EXPECT_EQ(c.timeline, d.timeline);
  EXPECT_EQ(c.population.total, 994837);
  EXPECT_EQ(c.calibration, d.calibration);
}

TEST(ScenarioJson, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(scenario_from_json_text(R"({"transmision": {}})"), ConfigError);
  EXPECT_THROW(scenario_from_json_text(R"({"transmission": {"beta": 1.5}})"), ConfigError);
  EXPECT_THROW(scenario_from_json_text(R"({"timeline": {"lockdown_day": 150}})"), ConfigError);
  EXPECT_THROW(
      scenario_from_json_text(R"({"population": {"fractions": {"disabled": 0.5}}})"),
      ConfigError);
  EXPECT_THROW(scenario_from_json_text(R"({"seeding": {"compartment": "E"}})"), ConfigError);
  EXPECT_THROW(scenario_from_json_text("{not json"), ConfigError);
  EXPECT_THROW(scenario_from_json_text(R"({"calibration": {"taus": []}})"), ConfigError);
}

TEST(ScenarioJson, MaxContactsMovesPowerLaws) {
  const ScenarioConfig c = scenario_from_json_text(R"({"population": {"max_contacts": 80}})");
  const auto& spec = std::get<PowerLawSpec>(c.population.weak_spec(Role::general, Period::pre_lockdown));
  EXPECT_EQ(spec.a_plus(), 80);
  EXPECT_NEAR(estimate_mean(0, 80, spec.exponent()), 10.34, 1e-4);
}

TEST(ShippedConfigs, LoadAndValidate) {
  const std::filesystem::path dir = CARENET_TEST_DATA_DIR;
  const ScenarioConfig ottawa = load_scenario(dir / "ottawa.json");
  EXPECT_EQ(ottawa.population.total, 994837);
  EXPECT_EQ(ottawa.resolved_seed_count(), 341);
  EXPECT_EQ(ottawa.timeline.during_lockdown.mode, MaskMode::dce);
  EXPECT_EQ(ottawa.sweep.pool_size, (std::vector<int>{4, 10, 25}));
  const ScenarioConfig vax = load_scenario(dir / "vaccination.json");
  ASSERT_TRUE(vax.vaccination);
  EXPECT_EQ(vax.vaccination->doses, 10151);
  EXPECT_EQ(vax.timeline.end_day, 300);
  EXPECT_EQ(vax.timeline.after_reopening.mode, MaskMode::all_star);
}

// --- sweeps ------------------------------------------------------------------

TEST(Sweeps, AxisValuesApply) {
  ScenarioConfig base;
  base.sweep.pool_size = {4, 10, 25};
  const auto variants = expand_axis(base, "pool_size");
  ASSERT_EQ(variants.size(), 3u);
  EXPECT_EQ(std::get<DeterministicSpec>(variants[2].config.population.pool).k, 25);
  EXPECT_EQ(variants[0].label, "4");

  EXPECT_EQ(apply_axis_value(base, "mask_mode", "dc").timeline.during_lockdown.mode, MaskMode::dc);
  EXPECT_EQ(apply_axis_value(base, "limit_mode", "none").limit_mode, ContactLimitMode::none);
  EXPECT_EQ(apply_axis_value(base, "seeding_target", "caregiver").seeding.target, Role::caregiver);
  EXPECT_FALSE(apply_axis_value(base, "seeding_target", "all").seeding.target);
  EXPECT_DOUBLE_EQ(apply_axis_value(base, "m", "0.26").transmission.m, 0.26);
  EXPECT_DOUBLE_EQ(apply_axis_value(base, "w_c", "1.5").transmission.w_c, 1.5);
  EXPECT_DOUBLE_EQ(apply_axis_value(base, "b", "0.5").transmission.b, 0.5);
}

TEST(Sweeps, UnknownAxisOrEmptyListIsConfigError) {
  ScenarioConfig base;
  EXPECT_THROW(expand_axis(base, "colour"), ConfigError);
  EXPECT_THROW(expand_axis(base, "pool_size"), ConfigError);
  EXPECT_THROW(apply_axis_value(base, "m", "lots"), ConfigError);
  EXPECT_THROW(apply_axis_value(base, "mask_mode", "sometimes"), ConfigError);
}

TEST(Experiment, SingleSeedMatchesRunTrial) {
  ScenarioConfig c = sized(2000);
  c.seeding.count = 5;
  c.timeline.lockdown_day = 3;
  c.timeline.reopen_day = 6;
  c.timeline.end_day = 12;
  const auto seeds = trial_seeds(42, 1);
  const auto batch = run_experiment(c, seeds);
  ASSERT_EQ(batch.size(), 1u);
  EXPECT_EQ(batch[0], run_trial(c, trial_seed(42, 0)));
  EXPECT_NE(trial_seed(42, 0), trial_seed(42, 1));
}

}  // namespace
}  // namespace carenet
