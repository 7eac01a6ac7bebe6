// paired.hpp
//
// Paired comparison of two strategies over the same windows. All tests are
// one-sided with the alternative "EXP outperforms FTD" (mean/median of
// exp - ftd greater than zero).

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace sipcraft::stats {

class InsufficientData : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Zero spread (or all-zero differences) where the statistic needs variation.
class DegenerateSample : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Aligned per-window outcomes; diffs are always exp - ftd.
class PairedSample {
 public:
  PairedSample(std::vector<double> exp_values, std::vector<double> ftd_values);

  std::span<const double> exp_values() const noexcept { return exp_; }
  std::span<const double> ftd_values() const noexcept { return ftd_; }
  std::span<const double> diffs() const noexcept { return diffs_; }
  std::size_t size() const noexcept { return diffs_.size(); }

 private:
  std::vector<double> exp_;
  std::vector<double> ftd_;
  std::vector<double> diffs_;
};

enum class TestMethod { exact, normal_approx };
std::string_view to_string(TestMethod m);

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::optional<double> df;
  TestMethod method = TestMethod::exact;
  std::optional<double> z;  // normal-approximation Wilcoxon only
};

double mean(std::span<const double> values);
/// Sample standard deviation, n - 1 denominator.
double sample_sd(std::span<const double> values);

/// t = mean/(sd/sqrt(n)), df = n - 1, p = P(T_df >= t).
TestResult paired_t_one_tailed(std::span<const double> diffs);
inline TestResult paired_t_one_tailed(const PairedSample& s) { return paired_t_one_tailed(s.diffs()); }

enum class WilcoxonMode { exact, normal_approx, automatic };
std::string_view to_string(WilcoxonMode m);
WilcoxonMode parse_wilcoxon_mode(std::string_view text);

/// Largest n (after dropping zeros) that `automatic` evaluates exactly.
inline constexpr std::size_t kWilcoxonExactLimit = 25;

/// Average ranks of |values|; |a| and |b| tie when they agree to 1e-9 relative.
std::vector<double> signed_rank_magnitudes(std::span<const double> nonzero_diffs);

/// Differences with |d| <= 1e-12 * scale removed, scale = max(1, max |d|).
std::vector<double> drop_zero_diffs(std::span<const double> diffs);

/// Signed-rank test, statistic W+ (sum of ranks of positive differences).
/// exact: P(W+ >= observed) over all 2^n equally likely sign patterns,
/// computed by counting the rank-sum distribution.
/// normal_approx: z = (W+ - n(n+1)/4 - 0.5) / sd with tie-corrected variance.
TestResult wilcoxon_signed_rank(std::span<const double> diffs, WilcoxonMode mode);
inline TestResult wilcoxon_signed_rank(const PairedSample& s, WilcoxonMode mode) {
  return wilcoxon_signed_rank(s.diffs(), mode);
}

/// mean(diffs) / sd(diffs).
double cohens_d(std::span<const double> diffs);
inline double cohens_d(const PairedSample& s) { return cohens_d(s.diffs()); }

enum class HedgesVariant { standard, paper_compat };
std::string_view to_string(HedgesVariant v);
HedgesVariant parse_hedges_variant(std::string_view text);

/// standard:     d * (1 - 3 / (4(n-1) - 1))
/// paper_compat: d * (1 - 3 / (4n - 9)), the factor behind the published
///               Hedges' g figures.
double hedges_g(double d, std::size_t n, HedgesVariant variant);

enum class EffectClass { negligible, meaningful, substantial, large };
std::string_view to_string(EffectClass c);

/// |d| < 0.2 negligible, < 0.5 meaningful, < 0.8 substantial, else large.
EffectClass classify_effect(double d);

}  // namespace sipcraft::stats
