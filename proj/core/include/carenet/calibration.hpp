#pragma once

// Fitted-parameter derivations: initial seed count, grid search of
// (tau, C*) against observed documented cases, and transmission parameters
// from secondary attack rates.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "carenet/scenario.hpp"
#include "carenet/world.hpp"

namespace carenet {

/// A0 = round(1 / ([alpha/(alpha+eta)] * q * tau)) with q = 1 - e^{-(alpha+eta)},
/// the probability of leaving A within a day. `literal` uses q = e^{-(alpha+eta)}.
std::int64_t initial_asymptomatic_count(double tau, double alpha, double eta,
                                        bool literal = false);

/// Cumulative documented cases; element 0 is day 1.
struct ObservedSeries {
  std::vector<std::string> dates;
  std::vector<double> cumulative;
  std::size_t days() const { return cumulative.size(); }
};

/// CSV with header `date,cumulative_documented`. Throws InputError on
/// malformed rows or a decreasing series.
ObservedSeries parse_observed_csv(std::istream& in);
ObservedSeries load_observed(const std::filesystem::path& path);
void write_observed_csv(std::ostream& out, const ObservedSeries& obs);


/// Euclidean norm of the difference in daily new documented cases over the
/// window. sim_cumulative[d] is day d (day 0 included); obs_cumulative[d-1]
/// is day d, and day 0 counts as zero.
double l2_daily_error(std::span<const double> sim_cumulative,
                      std::span<const double> obs_cumulative, FitWindow window = {});
double l2_daily_error(const TrialSeries& sim, const ObservedSeries& obs, FitWindow window = {});

struct GridSearchOptions {
  std::vector<double> taus;
  std::vector<int> cstars;
  int trials_per_cell = 96;
  /// Trials with fewer documented cases than this by filter_day are ignored.
  double min_cases = 250.0;
  int filter_day = 90;
  FitWindow window;
  std::uint64_t base_seed = 1;
  unsigned threads = 1;
};

/// Grid, trial count, filter and window from the scenario; seed and threads from the caller.
GridSearchOptions grid_options(const CalibrationSettings& settings, std::uint64_t base_seed,
                               unsigned threads);

struct GridCell {
  std::size_t tau_index = 0;
  std::size_t cstar_index = 0;
  double tau = 0.0;
  int cstar = 0;
  /// NaN when no trial passed the filter.
  double mean_error = 0.0;
  int trials_passed = 0;
  int trials_run = 0;
};

struct GridResult {
  std::vector<GridCell> cells;
  GridCell best;
};

/// Seed of trial `trial` in cell (i, j); independent of evaluation order.
std::uint64_t grid_trial_seed(std::uint64_t base, std::size_t tau_index,
                              std::size_t cstar_index, std::size_t trial);

/// Scenario for one grid cell: tau and C* applied, seed count rederived,
/// horizon cut to what the fit and filter need.
ScenarioConfig grid_cell_scenario(const ScenarioConfig& base, double tau, int cstar,
                                  const GridSearchOptions& options);

/// Throws CalibrationError when every cell is excluded by the filter.
GridResult grid_search(const ScenarioConfig& base, const ObservedSeries& obs,
                       const GridSearchOptions& options);

void write_grid_csv(std::ostream& out, const GridResult& result);


/// Days spent contagious (start-of-day A or I) by sampled index cases under
/// the daily engine, split by which days each contact type is exposed.
struct ContagiousDurations {
  std::vector<int> household;
  std::vector<int> weak;
  std::vector<int> caregiving;
};

/// Household and caregiving contacts are exposed on every A and I day; weak
/// contacts on A days, plus I days when the index case keeps weak contacts.
ContagiousDurations sample_contagious_durations(const RateSet& rates, double b, int trials,
                                                Rng& rng);

/// Per-day probability q with mean over d of 1 - (1 - q)^d equal to target.
double solve_daily_probability(std::span<const int> durations, double target);

struct SARCalibration {
  double beta = 0.0;
  double w_w = 0.0;
  double w_c = 0.0;
  /// 95% Monte Carlo half-widths (delta method).
  double beta_half_width = 0.0;
  double w_w_half_width = 0.0;
  double w_c_half_width = 0.0;
  int trials = 0;
};

/// Throws CalibrationError unless every target lies in (0, 1) and the
/// multipliers keep each per-day probability at most 1.
SARCalibration calibrate_transmission(const SARTargets& targets, const RateSet& rates, double b,
                                      double m, int trials, std::uint64_t seed);

/// Same solve on caller-supplied durations (common random numbers).
SARCalibration calibrate_transmission(const SARTargets& targets,
                                      const ContagiousDurations& durations, double m);

}  // namespace carenet
