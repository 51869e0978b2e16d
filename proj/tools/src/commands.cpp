#include "carenet/cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "carenet/analysis.hpp"
#include "carenet/calibration.hpp"
#include "carenet/csv.hpp"
#include "carenet/dynamics.hpp"
#include "carenet/errors.hpp"
#include "carenet/experiment.hpp"
#include "carenet/interventions.hpp"
#include "carenet/version.hpp"
#include "json.hpp"
#include "output_set.hpp"

namespace carenet::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

int guarded(Streams io, const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const UsageError& e) {
    io.err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

int resolve_trials(const RunManifest& m, int fallback) {
  const int trials = m.trials.value_or(fallback);
  if (trials < 1) throw UsageError("trial count must be at least 1");
  return trials;
}

json manifest_json(const RunManifest& m, const ScenarioConfig& config, int trials,
                   const json& seeds) {
  return json{{"tool", "carenet"},
              {"version", kVersion},
              {"revision", kBuildRevision},
              {"subcommand", m.subcommand},
              {"config_path", m.config.string()},
              {"base_seed", m.seed},
              {"trials", trials},
              {"threads", m.threads},
              {"seeds", seeds},
              {"resolved_config", json::parse(scenario_to_json_text(config))}};
}

void add_record(OutputSet& files, const RunManifest& m, const ScenarioConfig& config, int trials,
                const json& seeds) {
  files.add("manifest.json", manifest_json(m, config, trials, seeds).dump(2) + "\n");
  files.add("scenario.json", scenario_to_json_text(config));
}

template <class Fn>
std::string render(Fn&& write) {
  std::ostringstream out;
  write(out);
  return out.str();
}

std::vector<ColumnRef> aggregate_columns() {
  std::vector<ColumnRef> cols;
  for (SeriesField f : {SeriesField::documented_cumulative, SeriesField::infected_cumulative}) {
    cols.push_back({f, std::nullopt});
    for (Role r : kRoles) cols.push_back({f, r});
  }
  for (SeriesField f : {SeriesField::A, SeriesField::I, SeriesField::H}) {
    cols.push_back({f, std::nullopt});
  }
  return cols;
}

std::string aggregate_csv(std::span<const TrialSeries> batch) {
  std::vector<AggregateSeries> series;
  for (const auto& col : aggregate_columns()) series.push_back(aggregate_trials(batch, col));
  return render([&](std::ostream& out) { write_aggregate_csv(out, series, batch.size()); });
}

std::string trial_file_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "trial_%04zu.csv", i);
  return buf;
}

std::string day_file_name(std::string_view stem, int day) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*s_day%03d.csv", static_cast<int>(stem.size()), stem.data(),
                day);
  return buf;
}

std::vector<std::optional<Role>> all_and_groups() {
  std::vector<std::optional<Role>> out{std::nullopt};
  for (Role r : kRoles) out.emplace_back(r);
  return out;
}

std::string group_name(std::optional<Role> g) {
  return g ? std::string(to_string(*g)) : std::string("all");
}

struct FractionSummary {
  double mean = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

FractionSummary fraction_summary(std::span<const TrialSeries> batch, std::optional<Role> group) {
  std::vector<double> values;
  values.reserve(batch.size());
  double sum = 0.0;
  for (const auto& s : batch) {
    values.push_back(infection_fraction(s, group, s.last_day()));
    sum += values.back();
  }
  std::sort(values.begin(), values.end());
  return {sum / static_cast<double>(values.size()), percentile_sorted(values, 0.025),
          percentile_sorted(values, 0.975)};
}

}  // namespace

std::vector<int> parse_day_list(const std::string& text) {
  std::vector<int> days;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    const int day = std::stoi(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad day '" + item + "'");
    days.push_back(day);
  }
  if (days.empty()) throw std::invalid_argument("empty day list");
  return days;
}

int cmd_simulate(const RunManifest& m, Streams io) {
  return guarded(io, [&] {
    const int trials = resolve_trials(m, 100);
    const ScenarioConfig config = load_scenario(m.config);
    const auto seeds = trial_seeds(m.seed, static_cast<std::size_t>(trials));
    const auto batch = run_experiment(config, seeds, m.threads);

    OutputSet files;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      files.add(fs::path("trials") / trial_file_name(i),
                render([&](std::ostream& out) { write_trial_csv(out, batch[i]); }));
    }
    files.add("aggregate.csv", aggregate_csv(batch));
    add_record(files, m, config, trials, json(seeds));
    files.commit(m.out);

    const int day = batch.front().last_day();
    io.out << "simulated " << trials << " trial(s) of '" << config.name << "' to day " << day
           << "\n";
    for (const auto& g : all_and_groups()) {
      const auto f = fraction_summary(batch, g);
      io.out << "  " << group_name(g) << " infected fraction " << format_double(f.mean) << "\n";
    }
  });
}

int cmd_calibrate_grid(const RunManifest& m, const fs::path& observed, Streams io) {
  return guarded(io, [&] {
    const ScenarioConfig config = load_scenario(m.config);
    const ObservedSeries obs = load_observed(observed);
    GridSearchOptions options = grid_options(config.calibration, m.seed, m.threads);
    options.trials_per_cell = resolve_trials(m, options.trials_per_cell);
    const GridResult result = grid_search(config, obs, options);

    OutputSet files;
    files.add("grid.csv", render([&](std::ostream& out) { write_grid_csv(out, result); }));
    files.add("best.csv", render([&](std::ostream& out) {
                out << "tau,cstar,mean_error,trials_passed,trials_run\n"
                    << format_double(result.best.tau) << ',' << result.best.cstar << ','
                    << format_double(result.best.mean_error) << ',' << result.best.trials_passed
                    << ',' << result.best.trials_run << '\n';
              }));
    json seeds{{"derivation", "derive_seed(base_seed, {tau_index, cstar_index, trial})"},
               {"observed_path", observed.string()}};
    add_record(files, m, config, options.trials_per_cell, seeds);
    files.commit(m.out);

    io.out << "best tau " << format_double(result.best.tau) << ", C* " << result.best.cstar
           << ", mean error " << format_double(result.best.mean_error) << " ("
           << result.best.trials_passed << "/" << result.best.trials_run << " trials passed)\n";
    for (const auto& c : result.cells) {
      if (c.trials_passed == 0) {
        io.out << "  excluded tau " << format_double(c.tau) << ", C* " << c.cstar
               << ": no trial reached " << format_double(options.min_cases)
               << " documented cases by day " << options.filter_day << "\n";
      }
    }
  });
}

int cmd_calibrate_sar(const RunManifest& m, Streams io) {
  return guarded(io, [&] {
    const ScenarioConfig config = load_scenario(m.config);
    const int trials = resolve_trials(m, config.calibration.sar_trials);
    const SARCalibration fit =
        calibrate_transmission(config.calibration.sar, config.rates, config.transmission.b,
                               config.transmission.m, trials, m.seed);

    const auto table = [&](std::ostream& out) {
      out << "parameter,value,half_width_95\n"
          << "beta," << format_double(fit.beta) << ',' << format_double(fit.beta_half_width) << '\n'
          << "w_w," << format_double(fit.w_w) << ',' << format_double(fit.w_w_half_width) << '\n'
          << "w_c," << format_double(fit.w_c) << ',' << format_double(fit.w_c_half_width) << '\n';
    };
    OutputSet files;
    files.add("sar.csv", render(table));
    add_record(files, m, config, trials, json::array({m.seed}));
    files.commit(m.out);
    table(io.out);
  });
}

int cmd_analyze_network(const RunManifest& m, std::vector<int> days, Streams io,
                        bool write_edges) {
  return guarded(io, [&] {
    const ScenarioConfig config = load_scenario(m.config);
    if (days.empty()) days = {43, 45};
    std::sort(days.begin(), days.end());
    days.erase(std::unique(days.begin(), days.end()), days.end());
    for (int d : days) {
      if (d < 0 || d > config.timeline.end_day) {
        throw ConfigError("snapshot day " + std::to_string(d) + " is outside [0, " +
                          std::to_string(config.timeline.end_day) + "]");
      }
    }

    const std::uint64_t seed = trial_seed(m.seed, 0);
    Rng rng(seed);
    World world = build_world(config, rng);
    seed_infections(world, config.seeding, config.resolved_seed_count(), rng);

    OutputSet files;
    std::ostringstream summary;
    summary << "day,group,members,mean_degree,mean_second_neighbors,mean_strength,"
               "mean_eigencentrality,modal_eigencentrality\n";
    for (int d : days) {
      while (world.day < d) step_day(world, rng);
      const auto metrics = node_metrics(world);
      files.add(day_file_name("metrics", d),
                render([&](std::ostream& out) { write_metrics_csv(out, metrics); }));
      if (write_edges) {
        files.add(day_file_name("edges", d), render([&](std::ostream& out) {
                    write_edge_list_csv(out, world.network, config.transmission.weights());
                  }));
      }
      const CentralityReport report = centrality_report(metrics);
      for (Role r : kRoles) {
        const GroupCentrality& g = report[index(r)];
        summary << d << ',' << to_string(r) << ',' << g.members << ','
                << format_double(g.mean_degree) << ',' << format_double(g.mean_second_neighbors)
                << ',' << format_double(g.mean_strength) << ','
                << format_double(g.mean_eigencentrality) << ','
                << format_double(g.modal_eigencentrality) << '\n';
      }
    }
    files.add("centrality.csv", summary.str());
    add_record(files, m, config, 1, json::array({seed}));
    files.commit(m.out);
    io.out << summary.str();
  });
}

int cmd_compare(const RunManifest& m, const std::string& axis, Streams io) {
  return guarded(io, [&] {
    if (std::find(kVariantAxes.begin(), kVariantAxes.end(), axis) == kVariantAxes.end()) {
      throw UsageError("unknown axis '" + axis + "'");
    }
    const int trials = resolve_trials(m, 20);
    const ScenarioConfig config = load_scenario(m.config);
    if (sweep_values(config, axis).empty()) {
      throw UsageError("the scenario lists no values for axis '" + axis + "'");
    }
    const auto variants = expand_axis(config, axis);
    const auto seeds = trial_seeds(m.seed, static_cast<std::size_t>(trials));

    std::vector<std::vector<TrialSeries>> batches;
    for (const auto& v : variants) {
      io.out << "variant " << axis << "=" << v.label << "\n";
      batches.push_back(run_experiment(v.config, seeds, m.threads));
    }

    OutputSet files;
    std::ostringstream summary;
    summary << "variant,group,infected_fraction_mean,infected_fraction_p2.5,"
               "infected_fraction_p97.5,difference_from_first\n";
    for (std::size_t v = 0; v < variants.size(); ++v) {
      files.add(fs::path("variants") / variants[v].label / "aggregate.csv",
                aggregate_csv(batches[v]));
      for (const auto& g : all_and_groups()) {
        const auto f = fraction_summary(batches[v], g);
        const auto base = fraction_summary(batches.front(), g);
        summary << variants[v].label << ',' << group_name(g) << ',' << format_double(f.mean)
                << ',' << format_double(f.lower) << ',' << format_double(f.upper) << ','
                << format_double(f.mean - base.mean) << '\n';
      }
    }
    files.add("summary.csv", summary.str());

    const auto none = std::find_if(variants.begin(), variants.end(),
                                   [](const Variant& v) { return v.label == "none"; });
    if (axis == "vaccination_target" && none != variants.end()) {
      const auto& baseline = batches[static_cast<std::size_t>(none - variants.begin())];
      const std::optional<int> since =
          config.vaccination ? std::optional<int>(config.vaccination->day) : std::nullopt;
      std::ostringstream prevented;
      prevented << "variant,group,prevented_absolute,prevented_relative\n";
      for (std::size_t v = 0; v < variants.size(); ++v) {
        if (variants[v].label == "none") continue;
        const auto p = prevented_infections(batches[v], baseline, since);
        for (Role r : kRoles) {
          prevented << variants[v].label << ',' << to_string(r) << ','
                    << format_double(p.absolute[index(r)]) << ','
                    << format_double(p.relative[index(r)]) << '\n';
        }
        prevented << variants[v].label << ",all," << format_double(p.total_absolute) << ','
                  << format_double(p.total_relative) << '\n';
      }
      files.add("prevented.csv", prevented.str());
      io.out << prevented.str();
    }

    json record{{"axis", axis}, {"paired_seeds", seeds}};
    json labels = json::array();
    for (const auto& v : variants) labels.push_back(v.label);
    record["variants"] = labels;
    add_record(files, m, config, trials, record);
    files.commit(m.out);
    io.out << summary.str();
  });
}

}  // namespace carenet::cli
