#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace semharq::bench {

struct MeanCi {
  double mean = 0.0;
  /// Half the width of [lo, hi].
  double ci = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

double mean(std::span<const double> values);

/// Linear-interpolation quantile of sorted data, p in [0, 1].
double quantile_sorted(std::span<const double> sorted, double p);

/// Percentile bootstrap of the mean: `resamples` draws with replacement,
/// interval [q(a/2), q(1 - a/2)] for a = 1 - level. Deterministic in seed.
/// A single value (or zero resamples) yields a zero-width interval.
MeanCi bootstrap_mean_ci(std::span<const double> values, std::size_t resamples,
                         std::uint64_t seed, double level = 0.95);

}  // namespace semharq::bench
