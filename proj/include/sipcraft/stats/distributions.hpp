// distributions.hpp
//
// CDFs needed by the comparison battery. The normal CDF is built on std::erfc;
// the Student-t CDF on a continued-fraction regularized incomplete beta.
// Target accuracy is 1e-10 absolute.

#pragma once

namespace sipcraft::stats {

double normal_cdf(double x);
double normal_sf(double x);

/// Inverse of normal_cdf on (0, 1).
double normal_quantile(double p);

/// I_x(a, b) for a, b > 0 and x in [0, 1].
double regularized_incomplete_beta(double a, double b, double x);

double student_t_cdf(double t, double df);
double student_t_sf(double t, double df);

/// Q(lambda) = 2 * sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lambda^2), the limiting
/// survival function of the scaled two-sided KS statistic.
double kolmogorov_sf(double lambda);

}  // namespace sipcraft::stats
