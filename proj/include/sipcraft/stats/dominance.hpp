// dominance.hpp
//
// Empirical distribution comparisons: ECDFs, the two-sample Kolmogorov-Smirnov
// statistic and first/second-order stochastic dominance verdicts.
//
// Dominance is decided on the sample ECDFs themselves (no asymptotic test).
// `a` first-order dominates `b` when F_a(x) <= F_b(x) at every pooled support
// point with strict inequality somewhere; second-order uses the running
// integrals of the ECDFs instead. The integrals are piecewise linear between
// support points, so checking the support points is exact.

#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "sipcraft/stats/paired.hpp"

namespace sipcraft::stats {

/// Right-continuous step function F(x) = #{v <= x} / n.
struct Ecdf {
  std::vector<double> support;      // distinct values, ascending
  std::vector<double> cumulative;   // F at each support point; last is exactly 1

  double operator()(double x) const;
};

Ecdf ecdf(std::span<const double> values);

enum class KsAlternative {
  two_sided,  // D = sup |F_a - F_b|, p = Q_KS(lambda)
  greater,    // a stochastically larger: D = sup (F_b - F_a), p = exp(-2 lambda^2)
};

std::string_view to_string(KsAlternative a);
KsAlternative parse_ks_alternative(std::string_view text);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  KsAlternative alternative = KsAlternative::two_sided;
};

/// Asymptotic two-sample KS. lambda = (sqrt(ne) + 0.12 + 0.11/sqrt(ne)) * D with
/// ne = na*nb/(na+nb) (Stephens' small-sample scaling).
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b,
                       KsAlternative alternative = KsAlternative::two_sided);

/// True when `a` first-order dominates `b`.
bool first_order_dominates(std::span<const double> a, std::span<const double> b);
/// True when `a` second-order dominates `b`.
bool second_order_dominates(std::span<const double> a, std::span<const double> b);

/// Integral of the ECDF of `values` from -inf to x.
double integrated_ecdf(std::span<const double> values, double x);

enum class Dominance { exp_dominates, ftd_dominates, none };
std::string_view to_string(Dominance d);

Dominance check_fsd(const PairedSample& s);
Dominance check_ssd(const PairedSample& s);

}  // namespace sipcraft::stats
