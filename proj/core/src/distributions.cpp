#include "carenet/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "carenet/errors.hpp"

namespace carenet {
namespace {

// Within this distance of p = 1 or p = 2 the general closed form loses
// precision to cancellation, so the dedicated branch is used.
constexpr double kSpecialExponentBand = 1e-7;

// Integral of x^-p over [lo, hi], stable as p -> 1.
double power_integral(double lo, double hi, double p) {
  const double t = 1.0 - p;
  const double log_ratio = std::log(hi / lo);
  if (t == 0.0) return log_ratio;
  return std::pow(lo, t) * std::expm1(t * log_ratio) / t;
}

// Support after the shift away from zero: [A, B] with A = max(a_minus, 1).
struct ShiftedRange {
  double lo;
  double hi;
  int shift;
};

ShiftedRange shifted(int a_minus, int a_plus) {
  const int lo = std::max(a_minus, 1);
  const int shift = lo - a_minus;
  return {static_cast<double>(lo), static_cast<double>(a_plus + shift), shift};
}

double estimate_shifted_mean_p1(double A, double B) {
  const auto antiderivative = [](double x) {
    return 0.5 * (x * x * std::log1p(1.0 / x) + x - std::log(x + 1.0));
  };
  const double lower = A * std::log1p(1.0 / A) + antiderivative(B) - antiderivative(A);
  const double upper = antiderivative(B + 1.0) - antiderivative(A);
  return 0.5 * (lower + upper) / std::log((B + 1.0) / A);
}

double estimate_shifted_mean_p2(double A, double B) {
  const double lower = std::log((B + 2.0) / (A + 1.0));
  const double upper = 1.0 / (A + 1.0) + std::log((B + 1.0) / (A + 1.0));
  return 0.5 * (lower + upper) / power_integral(A, B + 1.0, 2.0);
}

double estimate_shifted_mean(double A, double B, double p) {
  // Bounds on sum_{n=A+1}^{B+1} n^(1-p), whose terms decrease for p > 1 and
  // increase for p < 1.
  const double wide = power_integral(A + 1.0, B + 2.0, p - 1.0);
  const double narrow = std::pow(A + 1.0, 1.0 - p) + power_integral(A + 1.0, B + 1.0, p - 1.0);
  const double lower = p > 1.0 ? wide : narrow;
  const double upper = p > 1.0 ? narrow : wide;
  // (B+1)^(2-p) - A^(2-p)
  const double endpoint_terms = (2.0 - p) * power_integral(A, B + 1.0, p - 1.0);
  const double norm = power_integral(A, B + 1.0, p);
  return (endpoint_terms - 0.5 * (lower + upper)) / ((1.0 - p) * norm);
}

}  // namespace

// --- PowerLawSpec ---------------------------------------------------------

PowerLawSpec PowerLawSpec::with_mean(int a_minus, int a_plus, double target_mean) {
  if (a_minus < 0 || a_minus > a_plus) {
    throw ConfigError("power law requires 0 <= a_minus <= a_plus");
  }
  if (a_minus == a_plus) {
    if (target_mean != a_minus) {
      throw UnsatisfiableMeanError("single-point power law cannot have mean " +
                                   std::to_string(target_mean));
    }
    return PowerLawSpec(a_minus, a_plus, 0.0, target_mean);
  }
  return PowerLawSpec(a_minus, a_plus, solve_exponent(a_minus, a_plus, target_mean),
                      target_mean);
}

PowerLawSpec PowerLawSpec::with_exponent(int a_minus, int a_plus, double exponent) {
  if (a_minus < 0 || a_minus > a_plus) {
    throw ConfigError("power law requires 0 <= a_minus <= a_plus");
  }
  if (!std::isfinite(exponent)) throw ConfigError("power-law exponent must be finite");
  return PowerLawSpec(a_minus, a_plus, exponent, std::nullopt);
}

PowerLawSpec PowerLawSpec::with_upper_bound(int a_plus) const {
  if (target_mean_) return with_mean(a_minus_, a_plus, *target_mean_);
  return with_exponent(a_minus_, a_plus, exponent_);
}

// --- EmpiricalSpec / DeterministicSpec / RateConstant ---------------------

EmpiricalSpec::EmpiricalSpec(std::vector<double> masses, double mass_tolerance)
    : masses_(std::move(masses)) {
  if (masses_.empty()) throw ConfigError("empirical distribution needs at least one mass");
  double total = 0.0;
  for (double p : masses_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw ConfigError("empirical masses must be finite and nonnegative");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > mass_tolerance) {
    std::ostringstream msg;
    msg << "empirical masses sum to " << total << ", outside 1 +/- " << mass_tolerance;
    throw ConfigError(msg.str());
  }
  cumulative_.resize(masses_.size());
  double running = 0.0;
  for (std::size_t i = 0; i < masses_.size(); ++i) {
    running += masses_[i];
    cumulative_[i] = running / total;
  }
  cumulative_.back() = 1.0;
}

double EmpiricalSpec::mean() const {
  const double total = std::accumulate(masses_.begin(), masses_.end(), 0.0);
  double m = 0.0;
  for (std::size_t i = 0; i < masses_.size(); ++i) m += static_cast<double>(i) * masses_[i];
  return m / total;
}

DeterministicSpec::DeterministicSpec(int value) : k(value) {
  if (value < 0) throw ConfigError("deterministic count must be nonnegative");
}

RateConstant::RateConstant(double per_day) : per_day_(per_day) {
  if (!(per_day > 0.0) || !std::isfinite(per_day)) {
    throw ConfigError("rate constants must be positive and finite");
  }
}

// --- sampling -------------------------------------------------------------

int sample_power_law(const PowerLawSpec& spec, double u) {
  const auto [A, B, shift] = shifted(spec.a_minus(), spec.a_plus());
  if (A == B) return spec.a_minus();
  const double t = 1.0 - spec.exponent();
  const double log_ratio = std::log((B + 1.0) / A);
  // Inverse of C^-1 * integral_A^x s^-p ds = u, written with expm1/log1p so
  // that it stays exact near p = 1.
  const double x = t == 0.0 ? A * std::exp(u * log_ratio)
                            : A * std::exp(std::log1p(u * std::expm1(t * log_ratio)) / t);
  const double n = std::clamp(std::floor(x), A, B);
  return static_cast<int>(n) - shift;
}

int sample_empirical(const EmpiricalSpec& spec, double u) {
  const auto& cdf = spec.cumulative();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  const auto idx = std::min<std::ptrdiff_t>(it - cdf.begin(), spec.max_value());
  return static_cast<int>(idx);
}

double sample_exponential(RateConstant rate, double u) {
  return -std::log1p(-u) / rate.per_day();
}

double power_law_mass(const PowerLawSpec& spec, int n) {
  if (n < spec.a_minus() || n > spec.a_plus()) return 0.0;
  const auto [A, B, shift] = shifted(spec.a_minus(), spec.a_plus());
  if (A == B) return 1.0;
  const double x = static_cast<double>(n + shift);
  return power_integral(x, x + 1.0, spec.exponent()) /
         power_integral(A, B + 1.0, spec.exponent());
}

// --- means ------------------------------------------------------------------

double estimate_mean(int a_minus, int a_plus, double exponent) {
  if (a_minus == a_plus) return a_minus;
  const auto [A, B, shift] = shifted(a_minus, a_plus);
  double m;
  if (std::abs(exponent - 1.0) < kSpecialExponentBand) {
    m = estimate_shifted_mean_p1(A, B);
  } else if (std::abs(exponent - 2.0) < kSpecialExponentBand) {
    m = estimate_shifted_mean_p2(A, B);
  } else {
    m = estimate_shifted_mean(A, B, exponent);
  }
  return m - shift;
}

double exact_mean(int a_minus, int a_plus, double exponent) {
  if (a_minus == a_plus) return a_minus;
  const auto [A, B, shift] = shifted(a_minus, a_plus);
  double weighted = 0.0;
  double total = 0.0;
  for (double n = A; n <= B; n += 1.0) {
    const double mass = power_integral(n, n + 1.0, exponent);
    weighted += n * mass;
    total += mass;
  }
  return weighted / total - shift;
}

double solve_exponent(int a_minus, int a_plus, double target_mean) {
  if (!(target_mean > a_minus && target_mean < a_plus)) {
    std::ostringstream msg;
    msg << "mean " << target_mean << " is not attainable on [" << a_minus << ", " << a_plus
        << "]";
    throw UnsatisfiableMeanError(msg.str());
  }
  const auto excess = [&](double p) { return estimate_mean(a_minus, a_plus, p) - target_mean; };

  double lo = kExponentLow;
  double hi = kExponentHigh;
  if (excess(lo) < 0.0 || excess(hi) > 0.0) {
    lo *= 2.0;
    hi *= 2.0;
    if (excess(lo) < 0.0 || excess(hi) > 0.0) {
      throw UnsatisfiableMeanError("target mean " + std::to_string(target_mean) +
                                   " not bracketed by the exponent search range");
    }
  }

  const double tolerance = 1e-6 * std::max(1.0, std::abs(target_mean));
  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    const double f = excess(mid);
    if (std::abs(f) <= tolerance) return mid;
    // mean decreases with p
    if (f > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-15) break;
  }
  return mid;
}

// --- variant helpers --------------------------------------------------------

int sample(const DistributionSpec& spec, Rng& rng) {
  return std::visit(
      [&rng](const auto& s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PowerLawSpec>) {
          return sample_power_law(s, uniform01(rng));
        } else if constexpr (std::is_same_v<T, EmpiricalSpec>) {
          return sample_empirical(s, uniform01(rng));
        } else {
          return s.k;
        }
      },
      spec);
}

double mean(const DistributionSpec& spec) {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PowerLawSpec>) {
          return estimate_mean(s.a_minus(), s.a_plus(), s.exponent());
        } else if constexpr (std::is_same_v<T, EmpiricalSpec>) {
          return s.mean();
        } else {
          return s.k;
        }
      },
      spec);
}

std::string describe(const DistributionSpec& spec) {
  std::ostringstream out;
  std::visit(
      [&out](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PowerLawSpec>) {
          out << "P(" << s.a_minus() << "," << s.a_plus() << ",";
          if (s.target_mean()) {
            out << *s.target_mean();
          } else {
            out << "p=" << s.exponent();
          }
          out << ")";
        } else if constexpr (std::is_same_v<T, EmpiricalSpec>) {
          out << "E(";
          for (std::size_t i = 0; i < s.masses().size(); ++i) {
            out << (i ? "," : "") << s.masses()[i];
          }
          out << ")";
        } else {
          out << "F(" << s.k << ")";
        }
      },
      spec);
  return out.str();
}

}  // namespace carenet
