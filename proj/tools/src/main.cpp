#include <iostream>

#include "CLI11.hpp"
#include "carenet/cli/commands.hpp"
#include "carenet/version.hpp"

namespace cli = carenet::cli;

int main(int argc, char** argv) {
  CLI::App app{"Agent-based epidemic simulation on caregiving contact networks"};
  app.set_version_flag("--version", std::string(carenet::kVersion) + " (" +
                                        carenet::kBuildRevision + ")");
  app.require_subcommand(1);

  cli::RunManifest m;
  int trials = 0;
  std::string observed;
  std::string axis;
  std::string days_text = "43,45";
  bool edges = false;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--config", m.config, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", m.seed, "Base seed")->capture_default_str();
    sub->add_option("--trials", trials, "Number of trials (command default if omitted)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", m.out, "Output directory")->required();
    sub->add_option("--threads", m.threads, "Worker threads across trials")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  };

  auto* simulate = app.add_subcommand("simulate", "Run trials and aggregate them");
  common(simulate);
  auto* grid = app.add_subcommand("calibrate-grid", "Grid search over tau and C*");
  common(grid);
  grid->add_option("--observed", observed, "Observed cumulative documented cases CSV")
      ->required();
  auto* sar = app.add_subcommand("calibrate-sar", "Fit beta, w_w and w_c to attack rates");
  common(sar);
  auto* analyze = app.add_subcommand("analyze-network", "Network metrics at snapshot days");
  common(analyze);
  analyze->add_option("--snapshot-days", days_text, "Comma-separated days")->capture_default_str();
  analyze->add_flag("--edges", edges, "Also write the edge list at each snapshot");
  auto* compare = app.add_subcommand("compare", "Paired-seed comparison along one axis");
  common(compare);
  compare->add_option("--axis", axis, "mask_mode, limit_mode, pool_size, seeding_target, "
                                      "vaccination_target, b, m or w_c")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (trials > 0) m.trials = trials;
  const cli::Streams io{std::cout, std::cerr};
  if (*simulate) {
    m.subcommand = "simulate";
    return cli::cmd_simulate(m, io);
  }
  if (*grid) {
    m.subcommand = "calibrate-grid";
    return cli::cmd_calibrate_grid(m, observed, io);
  }
  if (*sar) {
    m.subcommand = "calibrate-sar";
    return cli::cmd_calibrate_sar(m, io);
  }
  if (*analyze) {
    m.subcommand = "analyze-network";
    std::vector<int> days;
    try {
      days = cli::parse_day_list(days_text);
    } catch (const std::exception& e) {
      std::cerr << "usage error: --snapshot-days: " << e.what() << '\n';
      return cli::kExitUsage;
    }
    return cli::cmd_analyze_network(m, days, io, edges);
  }
  m.subcommand = "compare";
  return cli::cmd_compare(m, axis, io);
}
