#include "carenet/calibration.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "carenet/csv.hpp"
#include "carenet/errors.hpp"
#include "carenet/experiment.hpp"

namespace carenet {
namespace {

constexpr double kZ95 = 1.959963984540054;

std::chrono::sys_days parse_iso_date(const std::string& text, std::size_t line_no) {
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  const char* p = text.data();
  const char* end = p + text.size();
  bool ok = text.size() == 10 && text[4] == '-' && text[7] == '-';
  ok = ok && std::from_chars(p, p + 4, y).ec == std::errc();
  ok = ok && std::from_chars(p + 5, p + 7, m).ec == std::errc();
  ok = ok && std::from_chars(p + 8, end, d).ec == std::errc();
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                        std::chrono::day{d}};
  if (!ok || !ymd.ok()) {
    throw InputError("line " + std::to_string(line_no) + ": '" + text +
                     "' is not an ISO-8601 date");
  }
  return std::chrono::sys_days{ymd};
}

double mean_attack_rate(std::span<const int> durations, double q) {
  const double log_escape = std::log1p(-q);
  double sum = 0.0;
  for (int d : durations) sum += -std::expm1(d * log_escape);
  return sum / static_cast<double>(durations.size());
}

// Delta-method 95% half-width of the solved per-day probability.
double probability_half_width(std::span<const int> durations, double q) {
  const double n = static_cast<double>(durations.size());
  const double mean = mean_attack_rate(durations, q);
  double var = 0.0;
  double slope = 0.0;
  for (int d : durations) {
    const double g = -std::expm1(d * std::log1p(-q));
    var += (g - mean) * (g - mean);
    slope += d * std::pow(1.0 - q, d - 1);
  }
  var /= std::max(1.0, n - 1.0);
  slope /= n;
  return kZ95 * std::sqrt(var / n) / slope;
}

void require_target(double target, const char* name) {
  if (!(target > 0.0 && target < 1.0)) {
    throw CalibrationError(std::string(name) + " attack-rate target must lie in (0, 1)");
  }
}

}  // namespace

std::int64_t initial_asymptomatic_count(double tau, double alpha, double eta, bool literal) {
  if (!(tau > 0.0 && alpha > 0.0 && eta > 0.0)) {
    throw ConfigError("initial_asymptomatic_count needs positive tau, alpha and eta");
  }
  const double lambda = alpha + eta;
  const double leave_within_day = literal ? std::exp(-lambda) : -std::expm1(-lambda);
  return std::llround(1.0 / ((alpha / lambda) * leave_within_day * tau));
}

ObservedSeries parse_observed_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("observed series is empty");
  const auto header = split_csv_line(line);
  if (header.size() != 2 || header[0] != "date" || header[1] != "cumulative_documented") {
    throw InputError("observed series header must be 'date,cumulative_documented'");
  }
  ObservedSeries obs;
  std::optional<std::chrono::sys_days> previous;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 2) {
      throw InputError("line " + std::to_string(line_no) + ": expected 2 fields");
    }
    const auto date = parse_iso_date(fields[0], line_no);
    if (previous && date - *previous != std::chrono::days{1}) {
      throw InputError("line " + std::to_string(line_no) + ": dates must be consecutive days");
    }
    previous = date;
    double value = 0.0;
    const auto& text = fields[1];
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !(value >= 0.0)) {
      throw InputError("line " + std::to_string(line_no) + ": bad case count '" + text + "'");
    }
    if (!obs.cumulative.empty() && value < obs.cumulative.back()) {
      throw InputError("line " + std::to_string(line_no) + ": cumulative count decreases");
    }
    obs.dates.push_back(fields[0]);
    obs.cumulative.push_back(value);
  }
  if (obs.cumulative.empty()) throw InputError("observed series has no rows");
  return obs;
}

ObservedSeries load_observed(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open observed series " + path.string());
  return parse_observed_csv(in);
}

void write_observed_csv(std::ostream& out, const ObservedSeries& obs) {
  out << "date,cumulative_documented\n";
  for (std::size_t i = 0; i < obs.days(); ++i) {
    out << obs.dates[i] << ',' << format_double(obs.cumulative[i]) << '\n';
  }
}

double l2_daily_error(std::span<const double> sim_cumulative,
                      std::span<const double> obs_cumulative, FitWindow window) {
  if (window.first_day < 1 || window.last_day < window.first_day) {
    throw InputError("fit window must satisfy 1 <= first_day <= last_day");
  }
  const auto last = static_cast<std::size_t>(window.last_day);
  if (sim_cumulative.size() <= last) throw InputError("simulated series is shorter than the fit window");
  if (obs_cumulative.size() < last) throw InputError("observed series is shorter than the fit window");
  double sum = 0.0;
  for (auto d = static_cast<std::size_t>(window.first_day); d <= last; ++d) {
    const double sim_new = sim_cumulative[d] - sim_cumulative[d - 1];
    const double obs_new = obs_cumulative[d - 1] - (d >= 2 ? obs_cumulative[d - 2] : 0.0);
    sum += (sim_new - obs_new) * (sim_new - obs_new);
  }
  return std::sqrt(sum);
}

double l2_daily_error(const TrialSeries& sim, const ObservedSeries& obs, FitWindow window) {
  const auto documented = sim.documented_cumulative();
  return l2_daily_error(documented, obs.cumulative, window);
}

std::uint64_t grid_trial_seed(std::uint64_t base, std::size_t tau_index,
                              std::size_t cstar_index, std::size_t trial) {
  return derive_seed(base, {tau_index, cstar_index, trial});
}

GridSearchOptions grid_options(const CalibrationSettings& settings, std::uint64_t base_seed,
                               unsigned threads) {
  GridSearchOptions o;
  o.taus = settings.taus;
  o.cstars = settings.cstars;
  o.trials_per_cell = settings.trials_per_cell;
  o.min_cases = settings.min_cases;
  o.filter_day = settings.filter_day;
  o.window = settings.window;
  o.base_seed = base_seed;
  o.threads = threads;
  return o;
}

ScenarioConfig grid_cell_scenario(const ScenarioConfig& base, double tau, int cstar,
                                  const GridSearchOptions& options) {
  ScenarioConfig c = base;
  c.transmission.tau = tau;
  c.set_max_contacts(cstar);
  c.seeding.count.reset();
  const int horizon = std::max(options.window.last_day, options.filter_day);
  c.timeline.end_day = horizon;
  c.timeline.reopen_day = std::min(c.timeline.reopen_day, horizon);
  if (c.timeline.lockdown_day >= c.timeline.reopen_day) {
    throw ConfigError("fit horizon must extend past the lockdown day");
  }
  c.validate();
  return c;
}

GridResult grid_search(const ScenarioConfig& base, const ObservedSeries& obs,
                       const GridSearchOptions& options) {
  if (options.taus.empty() || options.cstars.empty()) throw ConfigError("grid axes must be nonempty");
  if (options.trials_per_cell < 1) throw ConfigError("trials_per_cell must be at least 1");
  if (obs.days() < static_cast<std::size_t>(options.window.last_day)) {
    throw InputError("observed series is shorter than the fit window");
  }

  GridResult result;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t ti = 0; ti < options.taus.size(); ++ti) {
    for (std::size_t ci = 0; ci < options.cstars.size(); ++ci) {
      const auto config = grid_cell_scenario(base, options.taus[ti], options.cstars[ci], options);
      std::vector<std::uint64_t> seeds(static_cast<std::size_t>(options.trials_per_cell));
      for (std::size_t k = 0; k < seeds.size(); ++k) seeds[k] = grid_trial_seed(options.base_seed, ti, ci, k);
      const auto trials = run_experiment(config, seeds, options.threads);

      GridCell cell{ti, ci, options.taus[ti], options.cstars[ci], nan, 0, options.trials_per_cell};
      double sum = 0.0;
      for (const auto& t : trials) {
        if (static_cast<double>(t.at(options.filter_day).documented) < options.min_cases) continue;
        sum += l2_daily_error(t, obs, options.window);
        ++cell.trials_passed;
      }
      if (cell.trials_passed > 0) cell.mean_error = sum / cell.trials_passed;
      result.cells.push_back(cell);
    }
  }

  const auto better = [](const GridCell& a, const GridCell& b) {
    if (a.mean_error != b.mean_error) return a.mean_error < b.mean_error;
    if (a.tau != b.tau) return a.tau < b.tau;
    return a.cstar < b.cstar;
  };
  bool found = false;
  for (const auto& cell : result.cells) {
    if (cell.trials_passed == 0) continue;
    if (!found || better(cell, result.best)) result.best = cell;
    found = true;
  }
  if (!found) {
    throw CalibrationError("no grid cell had a trial with at least " +
                           format_double(options.min_cases) + " documented cases by day " +
                           std::to_string(options.filter_day));
  }
  return result;
}

void write_grid_csv(std::ostream& out, const GridResult& result) {
  out << "tau,cstar,mean_error,trials_passed,trials_run\n";
  for (const auto& c : result.cells) {
    out << format_double(c.tau) << ',' << c.cstar << ',' << format_double(c.mean_error) << ','
        << c.trials_passed << ',' << c.trials_run << '\n';
  }
}

ContagiousDurations sample_contagious_durations(const RateSet& rates, double b, int trials,
                                                Rng& rng) {
  if (trials < 1) throw CalibrationError("need at least one duration sample");
  ContagiousDurations out;
  out.household.reserve(static_cast<std::size_t>(trials));
  out.weak.reserve(static_cast<std::size_t>(trials));
  out.caregiving.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    const bool breaks = bernoulli(rng, b);
    int days_a = 0;
    bool ill = false;
    while (true) {
      ++days_a;
      const double t_ill = sample_exponential(rates.alpha, uniform01(rng));
      const double t_removed = sample_exponential(rates.eta, uniform01(rng));
      if (t_ill <= t_removed) {
        if (t_ill < 1.0) {
          ill = true;
          break;
        }
      } else if (t_removed < 1.0) {
        break;
      }
    }
    int days_i = 0;
    while (ill) {
      ++days_i;
      const double t_hospital = sample_exponential(rates.mu, uniform01(rng));
      const double t_removed = sample_exponential(rates.rho, uniform01(rng));
      if (std::min(t_hospital, t_removed) < 1.0) break;
    }
    out.household.push_back(days_a + days_i);
    out.caregiving.push_back(days_a + days_i);
    out.weak.push_back(days_a + (breaks ? 0 : days_i));
  }
  return out;
}

double solve_daily_probability(std::span<const int> durations, double target) {
  require_target(target, "secondary");
  if (durations.empty()) throw CalibrationError("need at least one duration sample");
  double lo = 0.0;
  double hi = 1.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mean_attack_rate(durations, mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

SARCalibration calibrate_transmission(const SARTargets& targets,
                                      const ContagiousDurations& durations, double m) {
  require_target(targets.household, "household");
  require_target(targets.weak, "weak");
  require_target(targets.caregiving, "caregiving");
  if (!(m > 0.0 && m <= 1.0)) throw CalibrationError("mask factor m must lie in (0, 1]");

  const double q_h = solve_daily_probability(durations.household, targets.household);
  const double q_w = solve_daily_probability(durations.weak, targets.weak);
  const double q_c = solve_daily_probability(durations.caregiving, targets.caregiving);
  const double hw_h = probability_half_width(durations.household, q_h);
  const double hw_w = probability_half_width(durations.weak, q_w);
  const double hw_c = probability_half_width(durations.caregiving, q_c);

  SARCalibration out;
  out.trials = static_cast<int>(durations.household.size());
  out.beta = q_h;
  out.w_w = q_w / (std::sqrt(m) * q_h);
  out.w_c = q_c / q_h;
  out.beta_half_width = hw_h;
  const double rel_h = hw_h / q_h;
  out.w_w_half_width = out.w_w * std::hypot(hw_w / q_w, rel_h);
  out.w_c_half_width = out.w_c * std::hypot(hw_c / q_c, rel_h);
  return out;
}

SARCalibration calibrate_transmission(const SARTargets& targets, const RateSet& rates, double b,
                                      double m, int trials, std::uint64_t seed) {
  require_target(targets.household, "household");
  require_target(targets.weak, "weak");
  require_target(targets.caregiving, "caregiving");
  Rng rng(seed);
  const auto durations = sample_contagious_durations(rates, b, trials, rng);
  return calibrate_transmission(targets, durations, m);
}

}  // namespace carenet
