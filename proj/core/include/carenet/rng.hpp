#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <utility>

namespace carenet {

/// Every trial owns exactly one of these; draw order is part of the
/// reproducibility contract.
using Rng = std::mt19937_64;

/// Uniform double on [0, 1) from the top 53 bits. Never returns 1.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer on [0, n). Requires n > 0.
std::uint64_t uniform_below(Rng& rng, std::uint64_t n);

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

/// Fisher-Yates shuffle driven by uniform_below, so results do not depend on
/// the standard library's std::shuffle implementation.
template <class T>
void shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

/// Deterministic seed derivation: hash(base, parts...). Used for per-trial and
/// per-grid-cell seeds so that evaluation order never changes results.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts);

}  // namespace carenet
