#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "carenet/calibration.hpp"
#include "carenet/errors.hpp"
#include "carenet/experiment.hpp"
#include "carenet/scenario.hpp"
#include "generators.hpp"

namespace carenet {
namespace {

using testing::kPropertySeed;

// --- initial seed count ------------------------------------------------------

TEST(InitialCount, TableRatesGive341) {
  EXPECT_EQ(initial_asymptomatic_count(0.04, 0.0769, 0.0186), 341);
  // Hand evaluation: 0.8052 * 0.0911 * 0.04 = 2.934e-3.
  const double lambda = 0.0769 + 0.0186;
  const double denom = (0.0769 / lambda) * (1.0 - std::exp(-lambda)) * 0.04;
  EXPECT_NEAR(1.0 / denom, 340.9, 0.1);
}

TEST(InitialCount, LiteralReadingGives34) {
  EXPECT_EQ(initial_asymptomatic_count(0.04, 0.0769, 0.0186, true), 34);
}

TEST(InitialCount, CertainTransitionLimitIsOne) {
  EXPECT_EQ(initial_asymptomatic_count(1.0, 1e6, 1e-6), 1);
}

TEST(InitialCount, StrictlyDecreasingInTau) {
  Rng rng(kPropertySeed);
  for (int k = 0; k < 200; ++k) {
    const double alpha = testing::uniform_real(rng, 0.01, 1.0);
    const double eta = testing::uniform_real(rng, 0.005, 0.5);
    const double lambda = alpha + eta;
    const double per_tau = (alpha / lambda) * (1.0 - std::exp(-lambda));
    // Steps large enough that rounding cannot produce equal counts.
    double tau = testing::uniform_real(rng, 0.01, 0.2);
    std::int64_t previous = initial_asymptomatic_count(tau, alpha, eta);
    for (int s = 0; s < 5; ++s) {
      const double next_tau = tau * 1.5;
      if (next_tau > 1.0) break;
      const std::int64_t next = initial_asymptomatic_count(next_tau, alpha, eta);
      if (1.0 / (per_tau * tau) - 1.0 / (per_tau * next_tau) > 1.0) {
        EXPECT_LT(next, previous) << "alpha=" << alpha << " eta=" << eta << " tau=" << tau;
      } else {
        EXPECT_LE(next, previous);
      }
      previous = next;
      tau = next_tau;
    }
  }
}

TEST(InitialCount, RejectsNonpositiveInputs) {
  EXPECT_THROW(initial_asymptomatic_count(0.0, 0.0769, 0.0186), ConfigError);
  EXPECT_THROW(initial_asymptomatic_count(0.04, -1.0, 0.0186), ConfigError);
}

// --- observed series ---------------------------------------------------------

TEST(ObservedCsv, ParsesAndRoundTrips) {
  std::istringstream in("date,cumulative_documented\n2020-02-28,0\n2020-02-29,3\n2020-03-01,3.5\n");
  const auto obs = parse_observed_csv(in);
  ASSERT_EQ(obs.days(), 3u);
  EXPECT_EQ(obs.dates[1], "2020-02-29");
  EXPECT_DOUBLE_EQ(obs.cumulative[2], 3.5);
  std::ostringstream out;
  write_observed_csv(out, obs);
  std::istringstream again(out.str());
  const auto back = parse_observed_csv(again);
  EXPECT_EQ(back.dates, obs.dates);
  EXPECT_EQ(back.cumulative, obs.cumulative);
}

TEST(ObservedCsv, RejectsMalformedInput) {
  const char* bad[] = {
      "",
      "day,count\n2020-01-01,1\n",
      "date,cumulative_documented\n",
      "date,cumulative_documented\n2020-01-01\n",
      "date,cumulative_documented\n2020-13-01,1\n",
      "date,cumulative_documented\n2020-02-30,1\n",
      "date,cumulative_documented\n2020-01-01,1\n2020-01-03,2\n",
      "date,cumulative_documented\n2020-01-01,5\n2020-01-02,4\n",
      "date,cumulative_documented\n2020-01-01,-1\n",
      "date,cumulative_documented\n2020-01-01,abc\n",
  };
  for (const char* text : bad) {
    std::istringstream in(text);
    EXPECT_THROW(parse_observed_csv(in), InputError) << text;
  }
  EXPECT_THROW(load_observed("/nonexistent/observed.csv"), InputError);
}

// --- l2 error ----------------------------------------------------------------

TEST(L2Error, IdenticalSeriesGiveZero) {
  std::vector<double> obs(90);
  for (int d = 0; d < 90; ++d) obs[static_cast<std::size_t>(d)] = 3.0 * (d + 1) * (d + 1);
  std::vector<double> sim(91, 0.0);
  std::copy(obs.begin(), obs.end(), sim.begin() + 1);
  EXPECT_EQ(l2_daily_error(sim, obs), 0.0);
}

TEST(L2Error, ConstantDailyOffsetGivesRootNinety) {
  std::vector<double> obs(90);
  std::vector<double> sim(91, 0.0);
  for (int d = 1; d <= 90; ++d) {
    obs[static_cast<std::size_t>(d - 1)] = 2.0 * d;
    sim[static_cast<std::size_t>(d)] = 3.0 * d;
  }
  EXPECT_NEAR(l2_daily_error(sim, obs), std::sqrt(90.0), 1e-12);
  EXPECT_NEAR(l2_daily_error(sim, obs), 9.487, 5e-4);
}

TEST(L2Error, NonnegativeAndZeroOnlyWhenDailySeriesMatch) {
  Rng rng(kPropertySeed);
  for (int k = 0; k < 300; ++k) {
    const int days = testing::uniform_int(rng, 1, 40);
    const FitWindow window{testing::uniform_int(rng, 1, days), days};
    std::vector<double> obs(static_cast<std::size_t>(days));
    std::vector<double> sim(static_cast<std::size_t>(days) + 1, 0.0);
    double o = 0.0;
    double s = 0.0;
    bool differs = false;
    for (int d = 1; d <= days; ++d) {
      const double step = testing::uniform_int(rng, 0, 5);
      const double sim_step = bernoulli(rng, 0.1) ? step + 1.0 : step;
      if (d >= window.first_day && sim_step != step) differs = true;
      o += step;
      s += sim_step;
      obs[static_cast<std::size_t>(d - 1)] = o;
      sim[static_cast<std::size_t>(d)] = s;
    }
    const double e = l2_daily_error(sim, obs, window);
    EXPECT_GE(e, 0.0);
    EXPECT_EQ(e == 0.0, !differs);
  }
}

TEST(L2Error, WindowBeyondSeriesIsAnInputError) {
  const std::vector<double> sim(50, 0.0);
  const std::vector<double> obs(90, 0.0);
  EXPECT_THROW(l2_daily_error(sim, obs), InputError);
  const std::vector<double> long_sim(91, 0.0);
  const std::vector<double> short_obs(89, 0.0);
  EXPECT_THROW(l2_daily_error(long_sim, short_obs), InputError);
  EXPECT_THROW(l2_daily_error(long_sim, obs, FitWindow{0, 10}), InputError);
  EXPECT_THROW(l2_daily_error(long_sim, obs, FitWindow{20, 10}), InputError);
}

// --- grid search -------------------------------------------------------------

ScenarioConfig small_base(std::int64_t n) {
  ScenarioConfig c;
  c.population.total = n;
  c.timeline.lockdown_day = 10;
  return c;
}

GridSearchOptions small_options() {
  GridSearchOptions o;
  o.taus = {0.04};
  o.cstars = {60};
  o.trials_per_cell = 3;
  o.min_cases = 0.0;
  o.filter_day = 30;
  o.window = {1, 30};
  o.base_seed = 17;
  return o;
}

ObservedSeries flat_observed(int days, double level) {
  ObservedSeries obs;
  for (int d = 0; d < days; ++d) {
    obs.dates.push_back("d" + std::to_string(d));
    obs.cumulative.push_back(level);
  }
  return obs;
}

TEST(GridSearch, SingleCellIsReturned) {
  const auto result = grid_search(small_base(3000), flat_observed(30, 0.0), small_options());
  ASSERT_EQ(result.cells.size(), 1u);
  EXPECT_EQ(result.best.tau, 0.04);
  EXPECT_EQ(result.best.cstar, 60);
  EXPECT_EQ(result.best.trials_run, 3);
  EXPECT_EQ(result.best.trials_passed, 3);
  EXPECT_FALSE(std::isnan(result.best.mean_error));
}

TEST(GridSearch, CellMatchesDirectRunWithIndexSeeds) {
  auto options = small_options();
  options.taus = {0.03, 0.06};
  options.cstars = {40, 60};
  const auto base = small_base(3000);
  const auto obs = flat_observed(30, 0.0);
  const auto result = grid_search(base, obs, options);
  ASSERT_EQ(result.cells.size(), 4u);

  // Cell (1, 0) recomputed on its own.
  const auto config = grid_cell_scenario(base, 0.06, 40, options);
  std::vector<std::uint64_t> seeds;
  for (std::size_t k = 0; k < 3; ++k) seeds.push_back(grid_trial_seed(options.base_seed, 1, 0, k));
  double sum = 0.0;
  for (const auto& t : run_experiment(config, seeds, 1)) sum += l2_daily_error(t, obs, options.window);
  const GridCell& cell = result.cells[2];
  EXPECT_EQ(cell.tau_index, 1u);
  EXPECT_EQ(cell.cstar_index, 0u);
  EXPECT_DOUBLE_EQ(cell.mean_error, sum / 3.0);

  // Threading changes evaluation order only.
  options.threads = 3;
  const auto threaded = grid_search(base, obs, options);
  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    EXPECT_EQ(threaded.cells[i].mean_error, result.cells[i].mean_error);
  }
}

TEST(GridSearch, TrialSeedsDependOnlyOnIndices) {
  EXPECT_EQ(grid_trial_seed(5, 1, 2, 3), grid_trial_seed(5, 1, 2, 3));
  EXPECT_NE(grid_trial_seed(5, 1, 2, 3), grid_trial_seed(5, 2, 1, 3));
  EXPECT_NE(grid_trial_seed(5, 1, 2, 3), grid_trial_seed(5, 1, 2, 4));
  EXPECT_NE(grid_trial_seed(5, 1, 2, 3), grid_trial_seed(6, 1, 2, 3));
}

TEST(GridSearch, TiesBreakTowardSmallerTauThenSmallerCstar) {
  // At this size every cell seeds nobody, so each matches the all-zero
  // observation exactly.
  const auto base = small_base(1000);
  auto options = small_options();
  options.taus = {0.05, 0.03, 0.04};
  options.cstars = {40, 30};
  for (double tau : options.taus) {
    ASSERT_EQ(grid_cell_scenario(base, tau, 30, options).resolved_seed_count(), 0);
  }
  const auto result = grid_search(base, flat_observed(30, 0.0), options);
  for (const auto& c : result.cells) EXPECT_EQ(c.mean_error, 0.0);
  EXPECT_EQ(result.best.tau, 0.03);
  EXPECT_EQ(result.best.cstar, 30);
}

TEST(GridSearch, AllCellsExcludedIsACalibrationError) {
  auto options = small_options();
  options.min_cases = 1e9;
  EXPECT_THROW(grid_search(small_base(2000), flat_observed(30, 0.0), options), CalibrationError);
}

TEST(GridSearch, RejectsBadInputs) {
  auto options = small_options();
  EXPECT_THROW(grid_search(small_base(2000), flat_observed(10, 0.0), options), InputError);
  options.taus.clear();
  EXPECT_THROW(grid_search(small_base(2000), flat_observed(30, 0.0), options), ConfigError);
  options = small_options();
  options.trials_per_cell = 0;
  EXPECT_THROW(grid_search(small_base(2000), flat_observed(30, 0.0), options), ConfigError);
}

TEST(GridSearch, CellScenarioCutsHorizonAndRederivesSeeds) {
  auto base = small_base(100'000);
  base.seeding.count = 5;
  const auto options = small_options();
  const auto c = grid_cell_scenario(base, 0.08, 70, options);
  EXPECT_EQ(c.transmission.tau, 0.08);
  EXPECT_EQ(c.max_contacts, 70);
  EXPECT_EQ(c.timeline.end_day, 30);
  EXPECT_FALSE(c.seeding.count.has_value());
  auto at_04 = base;
  at_04.seeding.count.reset();
  at_04.transmission.tau = 0.04;
  EXPECT_LT(c.resolved_seed_count(), at_04.resolved_seed_count());
}

TEST(GridSearch, RecoversGeneratingCellOnCoarseGrid) {
  // Unrestricted growth over the window separates the cells.
  auto base = small_base(100'000);
  base.timeline.lockdown_day = 79;
  auto options = small_options();
  options.window = {1, 80};
  options.filter_day = 80;
  options.trials_per_cell = 6;

  // Observation: mean documented curve of the simulator at (0.04, 60).
  const auto truth = grid_cell_scenario(base, 0.04, 60, options);
  const auto runs = run_experiment(truth, trial_seeds(991, 12), 1);
  ObservedSeries obs = flat_observed(80, 0.0);
  for (const auto& t : runs) {
    const auto cum = t.documented_cumulative();
    for (int d = 1; d <= 80; ++d) {
      obs.cumulative[static_cast<std::size_t>(d - 1)] += cum[static_cast<std::size_t>(d)] / 12.0;
    }
  }

  options.taus = {0.01, 0.04, 0.16};
  options.cstars = {25, 60, 150};
  const auto result = grid_search(base, obs, options);
  EXPECT_EQ(result.best.tau, 0.04);
  EXPECT_EQ(result.best.cstar, 60);
}

TEST(GridSearch, CsvListsEveryCellWithNanForExcluded) {
  GridResult r;
  r.cells.push_back({0, 0, 0.04, 60, 12.5, 3, 4});
  r.cells.push_back({0, 1, 0.04, 70, std::nan(""), 0, 4});
  std::ostringstream out;
  write_grid_csv(out, r);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "tau,cstar,mean_error,trials_passed,trials_run");
  EXPECT_NE(text.find("0.04,60,12.5,3,4\n"), std::string::npos) << text;
  EXPECT_NE(text.find(",70,"), std::string::npos);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
}

// --- transmission parameters -------------------------------------------------

TEST(SolveDailyProbability, FixedTenDayDurationInvertsInClosedForm) {
  const std::vector<int> d(100, 10);
  EXPECT_NEAR(solve_daily_probability(d, 0.20), 1.0 - std::pow(0.8, 0.1), 1e-12);
  EXPECT_NEAR(solve_daily_probability(d, 0.20), 0.02207, 1e-5);
}

TEST(SolveDailyProbability, SmallTargetGivesSmallProbability) {
  const std::vector<int> d{3, 7, 12};
  const double q = solve_daily_probability(d, 1e-9);
  EXPECT_GT(q, 0.0);
  EXPECT_LT(q, 1e-9);
  EXPECT_THROW(solve_daily_probability(d, 0.0), CalibrationError);
  EXPECT_THROW(solve_daily_probability(d, 1.0), CalibrationError);
  EXPECT_THROW(solve_daily_probability(std::vector<int>{}, 0.2), CalibrationError);
}

TEST(SolveDailyProbability, HitsTargetOnRandomSamples) {
  Rng rng(kPropertySeed);
  for (int k = 0; k < 100; ++k) {
    std::vector<int> d(static_cast<std::size_t>(testing::uniform_int(rng, 1, 50)));
    for (auto& x : d) x = testing::uniform_int(rng, 1, 40);
    const double target = testing::uniform_real(rng, 0.01, 0.9);
    const double q = solve_daily_probability(d, target);
    double mean = 0.0;
    for (int x : d) mean += 1.0 - std::pow(1.0 - q, x);
    EXPECT_NEAR(mean / static_cast<double>(d.size()), target, 1e-10);
  }
}

TEST(ContagiousDurations, WeakNeverExceedsHouseholdAndBreakingIsAllOrNothing) {
  ScenarioConfig c;
  Rng rng(3);
  const auto d = sample_contagious_durations(c.rates, 1.0, 5000, rng);
  Rng rng0(3);
  const auto keep = sample_contagious_durations(c.rates, 0.0, 5000, rng0);
  EXPECT_EQ(keep.weak, keep.household);
  EXPECT_EQ(d.household, d.caregiving);
  double mean_h = 0.0;
  for (std::size_t i = 0; i < d.household.size(); ++i) {
    EXPECT_LE(d.weak[i], d.household[i]);
    EXPECT_GE(d.weak[i], 1);
    mean_h += d.household[i];
  }
  mean_h /= 5000.0;
  // A lasts about 1 / (1 - e^{-(alpha+eta)}) days and exceeds 10 on average.
  EXPECT_GT(mean_h, 10.0);
  EXPECT_LT(mean_h, 40.0);
}

TEST(CalibrateTransmission, ReproducesPublishedValues) {
  const ScenarioConfig c;
  const auto r = calibrate_transmission(c.calibration.sar, c.rates, c.transmission.b,
                                        c.transmission.m, 200000, 7);
  EXPECT_NEAR(r.beta, 0.0112, 0.05 * 0.0112);
  EXPECT_NEAR(r.w_w, 0.473, 0.05 * 0.473);
  EXPECT_NEAR(r.w_c, 2.268, 0.05 * 2.268);
  EXPECT_EQ(r.trials, 200000);
  EXPECT_GT(r.beta_half_width, 0.0);
  EXPECT_LT(r.beta_half_width, 0.01 * r.beta);
}

TEST(CalibrateTransmission, SolvedValuesReproduceTargetsOnFreshSamples) {
  const ScenarioConfig c;
  const SARTargets targets = c.calibration.sar;
  const double m = c.transmission.m;
  const auto r = calibrate_transmission(targets, c.rates, c.transmission.b, m, 100000, 11);
  Rng fresh(12345);
  const auto d = sample_contagious_durations(c.rates, c.transmission.b, 100000, fresh);
  const auto attack = [](const std::vector<int>& days, double q) {
    double s = 0.0;
    for (int x : days) s += 1.0 - std::pow(1.0 - q, x);
    return s / static_cast<double>(days.size());
  };
  // Monte Carlo standard errors at 1e5 samples are below 1% of each target.
  EXPECT_NEAR(attack(d.household, r.beta), targets.household, 0.02 * targets.household);
  EXPECT_NEAR(attack(d.weak, std::sqrt(m) * r.w_w * r.beta), targets.weak, 0.02 * targets.weak);
  EXPECT_NEAR(attack(d.caregiving, r.w_c * r.beta), targets.caregiving,
              0.02 * targets.caregiving);
}

TEST(CalibrateTransmission, DeterministicDurationsAndErrors) {
  ContagiousDurations d;
  d.household.assign(10, 10);
  d.weak.assign(10, 4);
  d.caregiving.assign(10, 10);
  const SARTargets targets{0.2, 0.035, 0.378};
  const auto r = calibrate_transmission(targets, d, 1.0);
  EXPECT_NEAR(r.beta, 1.0 - std::pow(0.8, 0.1), 1e-12);
  EXPECT_NEAR(r.w_w * r.beta, 1.0 - std::pow(1.0 - 0.035, 0.25), 1e-12);
  EXPECT_NEAR(r.w_c * r.beta, 1.0 - std::pow(1.0 - 0.378, 0.1), 1e-12);
  EXPECT_THROW(calibrate_transmission(SARTargets{0.0, 0.035, 0.378}, d, 1.0), CalibrationError);
  EXPECT_THROW(calibrate_transmission(targets, d, 0.0), CalibrationError);
  const ScenarioConfig c;
  EXPECT_THROW(calibrate_transmission(SARTargets{0.2, 1.2, 0.3}, c.rates, 0.9, 0.34, 10, 1),
               CalibrationError);
}

}  // namespace
}  // namespace carenet
