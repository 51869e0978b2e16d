#pragma once

// Contact-count distributions: approximate truncated power law, empirical
// mass table, deterministic point mass; plus exponential waiting times.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "carenet/rng.hpp"

namespace carenet {

/// Relative tolerance for the closed-form mean estimate (documented accuracy).
inline constexpr double kMeanEstimateTolerance = 0.01;
/// Allowed deviation of an empirical table's total mass from 1.
inline constexpr double kEmpiricalMassTolerance = 0.005;
/// Exponent search bracket for solve_exponent (widened once if needed).
inline constexpr double kExponentLow = -10.0;
inline constexpr double kExponentHigh = 50.0;

/// Approximate truncated power law on {a_minus, ..., a_plus}. The tail
/// decays like n^-p; when built from a target mean, p is solved so that the
/// closed-form mean estimate matches it.
class PowerLawSpec {
 public:
  static PowerLawSpec with_mean(int a_minus, int a_plus, double target_mean);
  static PowerLawSpec with_exponent(int a_minus, int a_plus, double exponent);

  int a_minus() const noexcept { return a_minus_; }
  int a_plus() const noexcept { return a_plus_; }
  double exponent() const noexcept { return exponent_; }
  /// Present only for specs built by with_mean.
  std::optional<double> target_mean() const noexcept { return target_mean_; }

  /// Same target mean (or exponent) on a new upper bound.
  PowerLawSpec with_upper_bound(int a_plus) const;

  friend bool operator==(const PowerLawSpec&, const PowerLawSpec&) = default;

 private:
  PowerLawSpec(int a_minus, int a_plus, double exponent, std::optional<double> target)
      : a_minus_(a_minus), a_plus_(a_plus), exponent_(exponent), target_mean_(target) {}

  int a_minus_;
  int a_plus_;
  double exponent_;
  std::optional<double> target_mean_;
};

/// Pr(N = n) proportional to masses[n], n = 0..k. Stored renormalised.
class EmpiricalSpec {
 public:
  explicit EmpiricalSpec(std::vector<double> masses,
                         double mass_tolerance = kEmpiricalMassTolerance);

  /// Masses as given (not renormalised).
  const std::vector<double>& masses() const noexcept { return masses_; }
  const std::vector<double>& cumulative() const noexcept { return cumulative_; }
  int max_value() const noexcept { return static_cast<int>(masses_.size()) - 1; }
  double mean() const;

  friend bool operator==(const EmpiricalSpec& a, const EmpiricalSpec& b) {
    return a.masses_ == b.masses_;
  }

 private:
  std::vector<double> masses_;
  std::vector<double> cumulative_;  // normalised, last entry exactly 1
};

struct DeterministicSpec {
  explicit DeterministicSpec(int value = 0);
  int k;
  friend bool operator==(const DeterministicSpec&, const DeterministicSpec&) = default;
};

using DistributionSpec = std::variant<DeterministicSpec, PowerLawSpec, EmpiricalSpec>;

/// Exponential rate in events per day.
class RateConstant {
 public:
  explicit RateConstant(double per_day);
  double per_day() const noexcept { return per_day_; }
  double mean_wait() const noexcept { return 1.0 / per_day_; }
  friend bool operator==(const RateConstant&, const RateConstant&) = default;

 private:
  double per_day_;
};

/// Inverse-CDF draw. u in [0, 1).
int sample_power_law(const PowerLawSpec& spec, double u);
int sample_empirical(const EmpiricalSpec& spec, double u);
/// -ln(1 - u) / rate, in days.
double sample_exponential(RateConstant rate, double u);

/// Closed-form mean of the shifted truncated distribution, averaging the
/// lower and upper integral bounds of the defining sum. O(1).
double estimate_mean(int a_minus, int a_plus, double exponent);

/// Exact mean by direct summation over the support. O(a_plus - a_minus).
double exact_mean(int a_minus, int a_plus, double exponent);

/// Exponent p with estimate_mean(a_minus, a_plus, p) == target_mean, by
/// bisection. Throws UnsatisfiableMeanError unless a_minus < target < a_plus.
double solve_exponent(int a_minus, int a_plus, double target_mean);

/// Probability that the sampler returns n (0 outside the support).
double power_law_mass(const PowerLawSpec& spec, int n);

int sample(const DistributionSpec& spec, Rng& rng);
/// Mean of the distribution (estimate for power laws).
double mean(const DistributionSpec& spec);
std::string describe(const DistributionSpec& spec);

}  // namespace carenet
