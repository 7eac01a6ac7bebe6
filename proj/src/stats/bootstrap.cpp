// bootstrap.cpp

#include "sipcraft/stats/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "sipcraft/stats/distributions.hpp"
#include "sipcraft/stats/paired.hpp"

namespace sipcraft::stats {

namespace {

// Unbiased draw from [0, n) by rejection.
std::size_t draw_index(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return static_cast<std::size_t>(x % n);
}

double resample_mean(std::span<const double> values, std::uint64_t seed, std::uint64_t r) {
  std::mt19937_64 rng(resample_seed(seed, r));
  const std::uint64_t n = values.size();
  double sum = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) sum += values[draw_index(rng, n)];
  return sum / static_cast<double>(n);
}

}  // namespace

std::uint64_t resample_seed(std::uint64_t seed, std::uint64_t r) {
  std::uint64_t z = seed + (r + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<double> bootstrap_means(std::span<const double> values, std::size_t resamples,
                                    std::uint64_t seed, unsigned threads) {
  if (values.empty()) throw InsufficientData("bootstrap of empty sample");
  std::vector<double> out(resamples);
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, resamples));
  if (workers == 1) {
    for (std::size_t r = 0; r < resamples; ++r) out[r] = resample_mean(values, seed, r);
    return out;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (resamples + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(resamples, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      for (std::size_t r = begin; r < end; ++r) out[r] = resample_mean(values, seed, r);
    });
  }
  pool.clear();  // joins
  return out;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw InsufficientData("quantile of empty sample");
  if (p <= 0.0) return sorted.front();
  if (p >= 1.0) return sorted.back();
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double bias_correction(std::span<const double> boot_means, double observed) {
  if (boot_means.empty()) throw InsufficientData("no bootstrap replicates");
  const double b = static_cast<double>(boot_means.size());
  const auto below = std::count_if(boot_means.begin(), boot_means.end(),
                                   [&](double m) { return m < observed; });
  const double frac = std::clamp(static_cast<double>(below) / b, 0.5 / b, 1.0 - 0.5 / b);
  return normal_quantile(frac);
}

double jackknife_acceleration(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 3) throw InsufficientData("jackknife acceleration needs n >= 3");
  double total = 0.0;
  for (double v : values) total += v;
  std::vector<double> loo(n);
  for (std::size_t i = 0; i < n; ++i) loo[i] = (total - values[i]) / static_cast<double>(n - 1);
  const double loo_mean = mean(loo);
  double s2 = 0.0;
  double s3 = 0.0;
  for (double t : loo) {
    const double d = loo_mean - t;
    s2 += d * d;
    s3 += d * d * d;
  }
  if (s2 == 0.0) return 0.0;
  return s3 / (6.0 * std::pow(s2, 1.5));
}

std::pair<double, double> bca_levels(double z0, double acceleration, double alpha) {
  const double lo = alpha / 2.0;
  const double hi = 1.0 - alpha / 2.0;
  if (z0 == 0.0 && acceleration == 0.0) return {lo, hi};
  auto adjust = [&](double p) {
    const double z = normal_quantile(p);
    const double s = z0 + z;
    return normal_cdf(z0 + s / (1.0 - acceleration * s));
  };
  return {adjust(lo), adjust(hi)};
}

std::pair<double, double> percentile_interval(std::span<const double> sorted, double alpha) {
  return {quantile_sorted(sorted, alpha / 2.0), quantile_sorted(sorted, 1.0 - alpha / 2.0)};
}

std::pair<double, double> bca_interval(std::span<const double> sorted, double z0,
                                       double acceleration, double alpha) {
  const auto [lo, hi] = bca_levels(z0, acceleration, alpha);
  return {quantile_sorted(sorted, lo), quantile_sorted(sorted, hi)};
}

BootstrapCI bootstrap_bca(std::span<const double> diffs, std::size_t resamples, double alpha,
                          std::uint64_t seed, unsigned threads) {
  if (diffs.size() < 3) throw InsufficientData("BCa bootstrap needs n >= 3");
  if (resamples < kMinResamples) {
    throw std::invalid_argument(fmt::format("BCa bootstrap needs >= {} resamples", kMinResamples));
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0, 1)");

  BootstrapCI ci;
  ci.point_estimate = mean(diffs);
  ci.resamples = resamples;
  ci.seed = seed;
  ci.alpha = alpha;

  const bool all_same = std::all_of(diffs.begin(), diffs.end(), [&](double d) { return d == diffs[0]; });
  if (all_same) {
    ci.lower = ci.upper = diffs[0];
    ci.point_estimate = diffs[0];
    ci.degenerate = true;
    return ci;
  }

  std::vector<double> means = bootstrap_means(diffs, resamples, seed, threads);
  ci.z0 = bias_correction(means, ci.point_estimate);
  ci.acceleration = jackknife_acceleration(diffs);
  std::sort(means.begin(), means.end());
  std::tie(ci.lower, ci.upper) = bca_interval(means, ci.z0, ci.acceleration, alpha);
  return ci;
}

}  // namespace sipcraft::stats
