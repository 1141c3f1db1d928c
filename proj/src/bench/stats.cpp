#include "semharq/bench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "semharq/error.hpp"
#include "semharq/rng.hpp"

namespace semharq::bench {

double mean(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("mean: no values");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw InvalidArgument("quantile: no values");
  if (p <= 0.0) return sorted.front();
  if (p >= 1.0) return sorted.back();
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(i);
  if (i + 1 >= sorted.size()) return sorted.back();
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

MeanCi bootstrap_mean_ci(std::span<const double> values, std::size_t resamples,
                         std::uint64_t seed, double level) {
  if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("bootstrap: level must be in (0, 1)");
  MeanCi out;
  out.mean = mean(values);
  out.lo = out.hi = out.mean;
  if (values.size() < 2 || resamples == 0) return out;

  Rng rng(seed);
  const std::size_t n = values.size();
  std::vector<double> means(resamples);
  for (auto& m : means) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += values[static_cast<std::size_t>(rng() % n)];
    m = acc / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  const double alpha = 1.0 - level;
  out.lo = quantile_sorted(means, alpha / 2.0);
  out.hi = quantile_sorted(means, 1.0 - alpha / 2.0);
  out.ci = std::max(0.0, (out.hi - out.lo) / 2.0);
  return out;
}

}  // namespace semharq::bench
