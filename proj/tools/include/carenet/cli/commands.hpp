#pragma once

// Subcommands of the carenet tool. Each returns a process exit status and
// reports failures on `err`; outputs appear in the output directory only
// when every file of the run was produced.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace carenet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct RunManifest {
  std::filesystem::path config;
  std::string subcommand;
  std::uint64_t seed = 1;
  /// Unset: the command's own default.
  std::optional<int> trials;
  std::filesystem::path out;
  unsigned threads = 1;
};

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

/// Per-trial series, aggregate bands and the reproducibility record.
/// Default trial count: 100.
int cmd_simulate(const RunManifest& manifest, Streams io);

/// Grid search over the scenario's (tau, C*) grid. `--trials` overrides the
/// per-cell trial count.
int cmd_calibrate_grid(const RunManifest& manifest, const std::filesystem::path& observed,
                       Streams io);

/// Secondary-attack-rate calibration of (beta, w_w, w_c). `--trials`
/// overrides the Monte Carlo sample size.
int cmd_calibrate_sar(const RunManifest& manifest, Streams io);

/// One trial run up to each snapshot day, writing node metrics and a
/// per-group centrality summary. Default days: 43 and 45.
int cmd_analyze_network(const RunManifest& manifest, std::vector<int> snapshot_days, Streams io,
                        bool write_edges = false);

/// Paired-seed comparison of the values listed for `axis` in the scenario's
/// sweep block. Default trial count: 20.
int cmd_compare(const RunManifest& manifest, const std::string& axis, Streams io);

/// Parses "43,45" into days; throws std::invalid_argument on bad input.
std::vector<int> parse_day_list(const std::string& text);

}  // namespace carenet::cli
