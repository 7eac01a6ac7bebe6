// dominance.cpp

#include "sipcraft/stats/dominance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <fmt/format.h>

#include "sipcraft/stats/distributions.hpp"

namespace sipcraft::stats {

namespace {

struct PooledCounts {
  std::vector<double> points;     // pooled distinct support, ascending
  std::vector<std::int64_t> ca;   // #{a <= x}
  std::vector<std::int64_t> cb;   // #{b <= x}
  std::int64_t na = 0;
  std::int64_t nb = 0;
};

PooledCounts pooled_counts(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InsufficientData("distribution comparison needs non-empty samples");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  PooledCounts pc;
  pc.na = static_cast<std::int64_t>(sa.size());
  pc.nb = static_cast<std::int64_t>(sb.size());
  pc.points.reserve(sa.size() + sb.size());
  std::merge(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(pc.points));
  pc.points.erase(std::unique(pc.points.begin(), pc.points.end()), pc.points.end());
  for (double x : pc.points) {
    pc.ca.push_back(std::upper_bound(sa.begin(), sa.end(), x) - sa.begin());
    pc.cb.push_back(std::upper_bound(sb.begin(), sb.end(), x) - sb.begin());
  }
  return pc;
}

// (F_b - F_a)(x_k) scaled by na*nb; exact integer.
std::int64_t scaled_gap(const PooledCounts& pc, std::size_t k) {
  return pc.cb[k] * pc.na - pc.ca[k] * pc.nb;
}

}  // namespace

double Ecdf::operator()(double x) const {
  auto it = std::upper_bound(support.begin(), support.end(), x);
  if (it == support.begin()) return 0.0;
  return cumulative[static_cast<std::size_t>(it - support.begin()) - 1];
}

Ecdf ecdf(std::span<const double> values) {
  if (values.empty()) throw InsufficientData("ecdf of empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  Ecdf f;
  const auto n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    f.support.push_back(sorted[i]);
    f.cumulative.push_back(i + 1 == sorted.size() ? 1.0 : static_cast<double>(i + 1) / n);
  }
  return f;
}

std::string_view to_string(KsAlternative a) { return a == KsAlternative::two_sided ? "two_sided" : "greater"; }

KsAlternative parse_ks_alternative(std::string_view text) {
  if (text == "two_sided") return KsAlternative::two_sided;
  if (text == "greater") return KsAlternative::greater;
  throw std::invalid_argument(fmt::format("unknown KS alternative '{}'", text));
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b, KsAlternative alternative) {
  const PooledCounts pc = pooled_counts(a, b);
  const double scale = static_cast<double>(pc.na) * static_cast<double>(pc.nb);
  std::int64_t best = 0;
  for (std::size_t k = 0; k < pc.points.size(); ++k) {
    const std::int64_t g = scaled_gap(pc, k);
    best = std::max(best, alternative == KsAlternative::two_sided ? std::abs(g) : g);
  }
  KsResult r;
  r.alternative = alternative;
  r.statistic = static_cast<double>(best) / scale;
  const double ne = scale / static_cast<double>(pc.na + pc.nb);
  const double root = std::sqrt(ne);
  const double lambda = (root + 0.12 + 0.11 / root) * r.statistic;
  r.p_value = alternative == KsAlternative::two_sided
                  ? kolmogorov_sf(lambda)
                  : std::clamp(std::exp(-2.0 * lambda * lambda), 0.0, 1.0);
  return r;
}

bool first_order_dominates(std::span<const double> a, std::span<const double> b) {
  const PooledCounts pc = pooled_counts(a, b);
  bool strict = false;
  for (std::size_t k = 0; k < pc.points.size(); ++k) {
    const std::int64_t g = scaled_gap(pc, k);
    if (g < 0) return false;
    strict = strict || g > 0;
  }
  return strict;
}

bool second_order_dominates(std::span<const double> a, std::span<const double> b) {
  const PooledCounts pc = pooled_counts(a, b);
  // running (integral of F_b - integral of F_a) * na * nb at each support point
  double running = 0.0;
  bool strict = false;
  for (std::size_t k = 0; k + 1 < pc.points.size(); ++k) {
    running += static_cast<double>(scaled_gap(pc, k)) * (pc.points[k + 1] - pc.points[k]);
    if (running < 0.0) return false;
    strict = strict || running > 0.0;
  }
  return strict;
}

double integrated_ecdf(std::span<const double> values, double x) {
  if (values.empty()) throw InsufficientData("integrated ecdf of empty sample");
  double sum = 0.0;
  for (double v : values) sum += std::max(0.0, x - v);
  return sum / static_cast<double>(values.size());
}

std::string_view to_string(Dominance d) {
  switch (d) {
    case Dominance::exp_dominates: return "exp_dominates";
    case Dominance::ftd_dominates: return "ftd_dominates";
    case Dominance::none: return "none";
  }
  return "none";
}

Dominance check_fsd(const PairedSample& s) {
  if (s.size() < 2) throw InsufficientData("dominance check needs n >= 2");
  if (first_order_dominates(s.exp_values(), s.ftd_values())) return Dominance::exp_dominates;
  if (first_order_dominates(s.ftd_values(), s.exp_values())) return Dominance::ftd_dominates;
  return Dominance::none;
}

Dominance check_ssd(const PairedSample& s) {
  if (s.size() < 2) throw InsufficientData("dominance check needs n >= 2");
  if (second_order_dominates(s.exp_values(), s.ftd_values())) return Dominance::exp_dominates;
  if (second_order_dominates(s.ftd_values(), s.exp_values())) return Dominance::ftd_dominates;
  return Dominance::none;
}

}  // namespace sipcraft::stats
