// paired.cpp

#include "sipcraft/stats/paired.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include <fmt/format.h>

#include "sipcraft/stats/distributions.hpp"

namespace sipcraft::stats {

namespace {

constexpr std::size_t kWilcoxonExactMax = 62;  // counts are held in uint64

bool same_magnitude(double a, double b) {
  return std::fabs(a - b) <= 1e-9 * std::max(std::fabs(a), std::fabs(b));
}

}  // namespace

PairedSample::PairedSample(std::vector<double> exp_values, std::vector<double> ftd_values)
    : exp_(std::move(exp_values)), ftd_(std::move(ftd_values)) {
  if (exp_.size() != ftd_.size()) {
    throw std::invalid_argument(
        fmt::format("paired sample sizes differ ({} vs {})", exp_.size(), ftd_.size()));
  }
  diffs_.resize(exp_.size());
  for (std::size_t i = 0; i < exp_.size(); ++i) {
    if (!std::isfinite(exp_[i]) || !std::isfinite(ftd_[i])) {
      throw std::invalid_argument("paired sample contains a non-finite value");
    }
    diffs_[i] = exp_[i] - ftd_[i];
  }
}

std::string_view to_string(TestMethod m) { return m == TestMethod::exact ? "exact" : "normal_approx"; }

std::string_view to_string(WilcoxonMode m) {
  switch (m) {
    case WilcoxonMode::exact: return "exact";
    case WilcoxonMode::normal_approx: return "normal_approx";
    case WilcoxonMode::automatic: return "auto";
  }
  return "auto";
}

WilcoxonMode parse_wilcoxon_mode(std::string_view text) {
  if (text == "exact") return WilcoxonMode::exact;
  if (text == "normal_approx" || text == "normal") return WilcoxonMode::normal_approx;
  if (text == "auto") return WilcoxonMode::automatic;
  throw std::invalid_argument(fmt::format("unknown wilcoxon mode '{}'", text));
}

std::string_view to_string(HedgesVariant v) {
  return v == HedgesVariant::standard ? "standard" : "paper_compat";
}

HedgesVariant parse_hedges_variant(std::string_view text) {
  if (text == "standard") return HedgesVariant::standard;
  if (text == "paper_compat") return HedgesVariant::paper_compat;
  throw std::invalid_argument(fmt::format("unknown hedges variant '{}'", text));
}

std::string_view to_string(EffectClass c) {
  switch (c) {
    case EffectClass::negligible: return "negligible";
    case EffectClass::meaningful: return "meaningful";
    case EffectClass::substantial: return "substantial";
    case EffectClass::large: return "large";
  }
  return "negligible";
}

double mean(std::span<const double> values) {
  if (values.empty()) throw InsufficientData("mean of empty sample");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sample_sd(std::span<const double> values) {
  if (values.size() < 2) throw InsufficientData("standard deviation needs n >= 2");
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

TestResult paired_t_one_tailed(std::span<const double> diffs) {
  if (diffs.size() < 2) throw InsufficientData("paired t-test needs n >= 2");
  const double sd = sample_sd(diffs);
  if (!(sd > 0.0)) throw DegenerateSample("paired t-test: differences have zero variance");
  const double n = static_cast<double>(diffs.size());
  const double t = mean(diffs) / (sd / std::sqrt(n));
  return TestResult{.statistic = t,
                    .p_value = student_t_sf(t, n - 1.0),
                    .df = n - 1.0,
                    .method = TestMethod::exact,
                    .z = std::nullopt};
}

std::vector<double> drop_zero_diffs(std::span<const double> diffs) {
  double scale = 1.0;
  for (double d : diffs) scale = std::max(scale, std::fabs(d));
  std::vector<double> out;
  for (double d : diffs) {
    if (std::fabs(d) > 1e-12 * scale) out.push_back(d);
  }
  return out;
}

std::vector<double> signed_rank_magnitudes(std::span<const double> nonzero_diffs) {
  const std::size_t n = nonzero_diffs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::fabs(nonzero_diffs[a]) < std::fabs(nonzero_diffs[b]);
  });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && same_magnitude(std::fabs(nonzero_diffs[order[j]]), std::fabs(nonzero_diffs[order[i]]))) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
    i = j;
  }
  return ranks;
}

namespace {

// P(W+ >= w) where each rank independently joins W+ with probability 1/2.
// Ranks are half-integers at worst, so doubling makes the support integral.
double exact_upper_tail(const std::vector<double>& ranks, double w_plus) {
  std::vector<std::uint64_t> doubled(ranks.size());
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    doubled[i] = static_cast<std::uint64_t>(std::llround(2.0 * ranks[i]));
    total += doubled[i];
  }
  std::vector<std::uint64_t> counts(total + 1, 0);
  counts[0] = 1;
  std::uint64_t reach = 0;
  for (std::uint64_t r : doubled) {
    reach += r;
    for (std::uint64_t s = reach; s >= r; --s) {
      counts[s] += counts[s - r];
      if (s == r) break;
    }
  }
  const auto threshold = static_cast<std::uint64_t>(std::llround(2.0 * w_plus));
  std::uint64_t at_least = 0;
  for (std::uint64_t s = threshold; s <= total; ++s) at_least += counts[s];
  return static_cast<double>(at_least) / std::ldexp(1.0, static_cast<int>(ranks.size()));
}

}  // namespace

TestResult wilcoxon_signed_rank(std::span<const double> diffs, WilcoxonMode mode) {
  const std::vector<double> nz = drop_zero_diffs(diffs);
  if (nz.empty()) throw DegenerateSample("wilcoxon: all differences are zero");
  const std::vector<double> ranks = signed_rank_magnitudes(nz);
  const std::size_t n = nz.size();

  double w_plus = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (nz[i] > 0.0) w_plus += ranks[i];
  }

  const bool exact = mode == WilcoxonMode::exact ||
                     (mode == WilcoxonMode::automatic && n <= kWilcoxonExactLimit);
  if (exact) {
    if (n > kWilcoxonExactMax) {
      throw InsufficientData(fmt::format("exact wilcoxon supports n <= {}", kWilcoxonExactMax));
    }
    return TestResult{.statistic = w_plus,
                      .p_value = exact_upper_tail(ranks, w_plus),
                      .df = std::nullopt,
                      .method = TestMethod::exact,
                      .z = std::nullopt};
  }

  const double nd = static_cast<double>(n);
  const double mu = nd * (nd + 1.0) / 4.0;
  double tie_term = 0.0;
  {
    std::vector<double> sorted = ranks;
    std::sort(sorted.begin(), sorted.end());
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j < n && sorted[j] == sorted[i]) ++j;
      const double t = static_cast<double>(j - i);
      tie_term += t * t * t - t;
      i = j;
    }
  }
  const double var = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0 - tie_term / 48.0;
  if (!(var > 0.0)) throw DegenerateSample("wilcoxon: zero variance under the null");
  const double z = (w_plus - mu - 0.5) / std::sqrt(var);
  return TestResult{.statistic = w_plus,
                    .p_value = normal_sf(z),
                    .df = std::nullopt,
                    .method = TestMethod::normal_approx,
                    .z = z};
}

double cohens_d(std::span<const double> diffs) {
  if (diffs.size() < 2) throw InsufficientData("cohen's d needs n >= 2");
  const double sd = sample_sd(diffs);
  if (!(sd > 0.0)) throw DegenerateSample("cohen's d: differences have zero variance");
  return mean(diffs) / sd;
}

double hedges_g(double d, std::size_t n, HedgesVariant variant) {
  if (n < 3) throw InsufficientData("hedges' g needs n >= 3");
  const double nd = static_cast<double>(n);
  const double denom = variant == HedgesVariant::standard ? 4.0 * (nd - 1.0) - 1.0 : 4.0 * nd - 9.0;
  return d * (1.0 - 3.0 / denom);
}

EffectClass classify_effect(double d) {
  const double a = std::fabs(d);
  if (a >= 0.8) return EffectClass::large;
  if (a >= 0.5) return EffectClass::substantial;
  if (a >= 0.2) return EffectClass::meaningful;
  return EffectClass::negligible;
}

}  // namespace sipcraft::stats
