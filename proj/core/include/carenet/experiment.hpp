#pragma once

// Multi-trial batches and scenario variants along one sweep axis.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "carenet/scenario.hpp"
#include "carenet/world.hpp"

namespace carenet {

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial);
std::vector<std::uint64_t> trial_seeds(std::uint64_t base_seed, std::size_t count);

/// One series per seed, in seed order. Trials run on up to `threads`
/// workers; results do not depend on the thread count.
std::vector<TrialSeries> run_experiment(const ScenarioConfig& config,
                                        std::span<const std::uint64_t> seeds,
                                        unsigned threads = 1);

inline constexpr std::array<std::string_view, 8> kVariantAxes{
    "mask_mode", "limit_mode", "pool_size", "seeding_target",
    "vaccination_target", "b", "m", "w_c"};

struct Variant {
  std::string label;
  ScenarioConfig config;
};

/// Applies one axis value to a copy of `base`. Throws ConfigError on an
/// unknown axis or a value the axis cannot take.
ScenarioConfig apply_axis_value(const ScenarioConfig& base, std::string_view axis,
                                std::string_view value);

/// Values listed for `axis` in the sweep block, as text. Throws ConfigError
/// for an unknown axis.
std::vector<std::string> sweep_values(const ScenarioConfig& base, std::string_view axis);

/// One variant per value listed for `axis` in base.sweep. Throws
/// ConfigError on an unknown axis or an empty list.
std::vector<Variant> expand_axis(const ScenarioConfig& base, std::string_view axis);

}  // namespace carenet
