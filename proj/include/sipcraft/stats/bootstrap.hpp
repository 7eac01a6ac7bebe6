// bootstrap.hpp
//
// BCa (bias-corrected and accelerated) bootstrap interval for the mean of the
// paired differences.
//
// Resample r draws its indices from a std::mt19937_64 seeded with
// resample_seed(seed, r), so the resampled means do not depend on how the
// resamples are split across threads.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace sipcraft::stats {

struct BootstrapCI {
  double point_estimate = 0.0;  // observed mean of the differences
  double lower = 0.0;
  double upper = 0.0;
  std::size_t resamples = 0;
  std::uint64_t seed = 0;
  double alpha = 0.05;  // two-sided tail mass
  double z0 = 0.0;
  double acceleration = 0.0;
  bool degenerate = false;  // all differences identical; interval is the point
};

inline constexpr std::size_t kMinResamples = 1000;

/// SplitMix64 finaliser of (seed, r).
std::uint64_t resample_seed(std::uint64_t seed, std::uint64_t r);

/// Means of `resamples` bootstrap resamples, in resample order.
std::vector<double> bootstrap_means(std::span<const double> values, std::size_t resamples,
                                    std::uint64_t seed, unsigned threads = 1);

/// Type-7 quantile of an ascending sample.
double quantile_sorted(std::span<const double> sorted, double p);

/// Bias correction z0 = Phi^-1(fraction of bootstrap means below `observed`),
/// the fraction clamped to [1/(2B), 1 - 1/(2B)].
double bias_correction(std::span<const double> boot_means, double observed);

/// Jackknife acceleration from leave-one-out means.
double jackknife_acceleration(std::span<const double> values);

/// Endpoint levels Phi(z0 + (z0 + z)/(1 - a (z0 + z))) for z = Phi^-1(alpha/2)
/// and Phi^-1(1 - alpha/2). With z0 = a = 0 the levels are alpha/2 and
/// 1 - alpha/2 exactly.
std::pair<double, double> bca_levels(double z0, double acceleration, double alpha);

/// [q(alpha/2), q(1 - alpha/2)] of the sorted bootstrap distribution.
std::pair<double, double> percentile_interval(std::span<const double> sorted, double alpha);

std::pair<double, double> bca_interval(std::span<const double> sorted, double z0,
                                       double acceleration, double alpha);

/// Full BCa procedure. Requires n >= 3, resamples >= kMinResamples,
/// 0 < alpha < 1.
BootstrapCI bootstrap_bca(std::span<const double> diffs, std::size_t resamples, double alpha,
                          std::uint64_t seed, unsigned threads = 1);

}  // namespace sipcraft::stats
