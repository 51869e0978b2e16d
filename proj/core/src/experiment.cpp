#include "carenet/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <mutex>
#include <thread>

#include "carenet/dynamics.hpp"
#include "carenet/csv.hpp"
#include "carenet/errors.hpp"

namespace carenet {
namespace {

double parse_number(std::string_view axis, std::string_view value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("axis " + std::string(axis) + " expects a number, got '" +
                      std::string(value) + "'");
  }
  return out;
}

std::string format_value(double v) { return format_double(v); }

}  // namespace

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial) {
  return derive_seed(base_seed, {static_cast<std::uint64_t>(trial)});
}

std::vector<std::uint64_t> trial_seeds(std::uint64_t base_seed, std::size_t count) {
  std::vector<std::uint64_t> seeds(count);
  for (std::size_t i = 0; i < count; ++i) seeds[i] = trial_seed(base_seed, i);
  return seeds;
}

std::vector<TrialSeries> run_experiment(const ScenarioConfig& config,
                                        std::span<const std::uint64_t> seeds, unsigned threads) {
  config.validate();
  std::vector<TrialSeries> results(seeds.size());
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(seeds.size())));
  if (workers <= 1) {
    for (std::size_t i = 0; i < seeds.size(); ++i) results[i] = run_trial(config, seeds[i]);
    return results;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto work = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        results[i] = run_trial(config, seeds[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

ScenarioConfig apply_axis_value(const ScenarioConfig& base, std::string_view axis,
                                std::string_view value) {
  ScenarioConfig c = base;
  if (axis == "mask_mode") {
    c.timeline.during_lockdown = {parse_mask_mode(value), std::nullopt};
  } else if (axis == "limit_mode") {
    c.limit_mode = parse_contact_limit_mode(value);
  } else if (axis == "pool_size") {
    c.population.pool = DeterministicSpec(static_cast<int>(parse_number(axis, value)));
  } else if (axis == "seeding_target") {
    c.seeding.target = value == "all" ? std::nullopt : std::optional<Role>(parse_role(value));
  } else if (axis == "vaccination_target") {
    if (value == "none") {
      c.vaccination.reset();
    } else {
      if (!c.vaccination) {
        throw ConfigError("vaccination_target axis needs a vaccination block for doses and day");
      }
      c.vaccination->target = parse_role(value);
    }
  } else if (axis == "b") {
    c.transmission.b = parse_number(axis, value);
  } else if (axis == "m") {
    c.transmission.m = parse_number(axis, value);
  } else if (axis == "w_c") {
    c.transmission.w_c = parse_number(axis, value);
  } else {
    throw ConfigError("unknown variant axis '" + std::string(axis) + "'");
  }
  c.validate();
  return c;
}

std::vector<std::string> sweep_values(const ScenarioConfig& base, std::string_view axis) {
  std::vector<std::string> values;
  const auto& s = base.sweep;
  const auto numbers = [&values](const auto& list) {
    for (auto v : list) values.push_back(format_value(static_cast<double>(v)));
  };
  if (axis == "mask_mode") {
    values = s.mask_mode;
  } else if (axis == "limit_mode") {
    values = s.limit_mode;
  } else if (axis == "pool_size") {
    numbers(s.pool_size);
  } else if (axis == "seeding_target") {
    values = s.seeding_target;
  } else if (axis == "vaccination_target") {
    values = s.vaccination_target;
  } else if (axis == "b") {
    numbers(s.b);
  } else if (axis == "m") {
    numbers(s.m);
  } else if (axis == "w_c") {
    numbers(s.w_c);
  } else {
    throw ConfigError("unknown variant axis '" + std::string(axis) + "'");
  }
  return values;
}

std::vector<Variant> expand_axis(const ScenarioConfig& base, std::string_view axis) {
  const std::vector<std::string> values = sweep_values(base, axis);
  if (values.empty()) {
    throw ConfigError("no values listed for axis '" + std::string(axis) + "' in sweep");
  }
  std::vector<Variant> out;
  for (const auto& v : values) out.push_back({v, apply_axis_value(base, axis, v)});
  return out;
}

}  // namespace carenet
