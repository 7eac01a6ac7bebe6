#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "sipcraft/stats/dominance.hpp"
#include "synthetic.hpp"

using namespace sipcraft::stats;

namespace {

std::vector<double> random_sample(std::mt19937_64& rng, std::size_t n, bool discrete) {
  std::vector<double> v(n);
  std::normal_distribution<double> z(0.0, 1.0);
  for (auto& x : v) x = discrete ? static_cast<double>(rng() % 6) : z(rng);
  return v;
}

// integrated-ECDF oracle evaluated directly from the definition
bool ssd_oracle(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pts(a);
  pts.insert(pts.end(), b.begin(), b.end());
  bool strict = false;
  for (double x : pts) {
    const double gap = sipcraft::stats::integrated_ecdf(b, x) - sipcraft::stats::integrated_ecdf(a, x);
    if (gap < -1e-12) return false;
    strict = strict || gap > 1e-12;
  }
  return strict;
}

}  // namespace

TEST_CASE("ecdf is monotone and ends at one") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 100; ++k) {
    const auto v = random_sample(rng, 1 + rng() % 30, k % 2);
    const auto e = ecdf(v);
    CHECK(e.cumulative.back() == 1.0);
    CHECK(std::is_sorted(e.cumulative.begin(), e.cumulative.end()));
    CHECK(std::adjacent_find(e.support.begin(), e.support.end(), std::greater_equal<>()) == e.support.end());
    CHECK(e(e.support.front() - 1.0) == 0.0);
  }
}

TEST_CASE("KS against scipy on the published columns") {
  const auto rows = sipcraft::testing::published_rows();
  std::vector<double> e1, f1;
  for (const auto& r : rows) {
    if (r.years() == 1) {
      e1.push_back(r.cagr_e);
      f1.push_back(r.cagr_f);
    }
  }
  const auto g = ks_two_sample(e1, f1, KsAlternative::greater);
  CHECK(g.statistic == Catch::Approx(3.0 / 22.0).margin(1e-12));
  CHECK(g.p_value == Catch::Approx(0.6391).margin(1e-4));
  const auto two = ks_two_sample(e1, f1, KsAlternative::two_sided);
  CHECK(two.statistic >= g.statistic);
}

TEST_CASE("property: FSD implies SSD") {
  std::mt19937_64 rng(77);
  int fsd_seen = 0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = 2 + rng() % 20;
    auto f = random_sample(rng, n, k % 3 == 0);
    auto e = random_sample(rng, n, k % 3 == 0);
    if (k % 4 == 0) {
      for (std::size_t i = 0; i < n; ++i) e[i] = f[i] + static_cast<double>(rng() % 3);
    }
    const PairedSample s(e, f);
    const auto fsd = check_fsd(s);
    if (fsd != Dominance::none) {
      ++fsd_seen;
      CHECK(check_ssd(s) == fsd);
    }
    CHECK(second_order_dominates(e, f) == ssd_oracle(e, f));
  }
  CHECK(fsd_seen > 100);
}

TEST_CASE("property: shifts dominate, identical samples do not") {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 200; ++k) {
    const auto x = random_sample(rng, 2 + rng() % 20, k % 2);
    const double c = 0.001 + static_cast<double>(rng() % 1000) / 100.0;
    std::vector<double> y(x);
    for (auto& v : y) v += c;
    const PairedSample shifted(y, x);
    CHECK(check_fsd(shifted) == Dominance::exp_dominates);
    CHECK(check_ssd(shifted) == Dominance::exp_dominates);
    const PairedSample same(x, x);
    CHECK(check_fsd(same) == Dominance::none);
    CHECK(check_ssd(same) == Dominance::none);
  }
}

TEST_CASE("SSD without FSD: mean-preserving spread") {
  const PairedSample s({1.0, 1.0}, {0.0, 2.0});
  CHECK(check_fsd(s) == Dominance::none);
  CHECK(check_ssd(s) == Dominance::exp_dominates);
  const PairedSample t({1.0, 1.5}, {0.0, 2.0});
  CHECK(check_fsd(t) == Dominance::none);
  CHECK(check_ssd(t) == Dominance::exp_dominates);
}
