#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "mini_schema.hpp"
#include "sipcraft/report.hpp"
#include "synthetic.hpp"

using namespace sipcraft;
using namespace sipcraft::report;

namespace {

// sort-and-interpolate oracle, written independently of quantile_sorted
double oracle_quantile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

std::vector<stats::ComparisonReport> published_reports() {
  std::vector<stats::ComparisonReport> out;
  for (int d : {1, 3, 5, 10, 20}) {
    std::vector<double> e, f;
    for (const auto& r : testing::published_rows()) {
      if (r.years() == d) {
        e.push_back(r.cagr_e);
        f.push_back(r.cagr_f);
      }
    }
    stats::BatteryConfig c;
    c.resamples = 2000;
    out.push_back(stats::run_battery(stats::PairedSample(e, f), c, std::to_string(d) + "-Year"));
  }
  return out;
}

}  // namespace

TEST_CASE("round2 and fixed2") {
  CHECK(fixed2(-0.001) == "0.00");
  CHECK(round2(-0.004) == 0.0);
  CHECK_FALSE(std::signbit(round2(-0.004)));
  CHECK(fixed2(2.5149999) == "2.51");
  CHECK(round2(62.94 - 60.43) == 2.51);
}

TEST_CASE("difference is rounded from full precision; the other convention is flagged") {
  const WindowRow r{2003, 2003, 1.004, 1.016};  // rounded 1.00 / 1.02 but full difference 0.012
  CHECK(round2(r.difference()) == 0.01);
  REQUIRE(r.difference_of_rounded());
  CHECK(*r.difference_of_rounded() == 0.02);
  const auto md = render_window_table(std::vector{r}, Format::markdown);
  CHECK(md.find("| 2003 | 2003 | 1 | 1.00 | 1.02 | 0.01 |") != std::string::npos);
  CHECK(md.find("difference of rounded 0.02") != std::string::npos);
}

TEST_CASE("published window table parses and re-renders byte-identically") {
  const auto text = testing::slurp(testing::data_dir() + "/published_window_cagr.csv");
  const auto rows = parse_window_csv(text);
  CHECK(rows.size() == 36);
  CHECK(render_window_table(rows, Format::csv) == text);
}

TEST_CASE("window CSV validation") {
  CHECK_THROWS_AS(parse_window_csv("from,to,years,cagr_f,cagr_e,difference\n2003,2005,2,1,2,1\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_window_csv("from,to,years,cagr_f,cagr_e,difference\n2003,2003,1,1,2,0.5\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_window_csv(""), std::invalid_argument);
}

TEST_CASE("property: json render -> parse -> render is a fixed point") {
  std::vector<WindowRow> rows{{2003, 2003, 60.4312345, 62.9387}, {2004, 2006, 1.004, 1.016}, {2005, 2024, -3.3333, 7.1}};
  const auto once = render_window_table(rows, Format::json);
  const auto parsed = parse_window_json(nlohmann::json::parse(once));
  CHECK(parsed == rows);
  CHECK(render_window_table(parsed, Format::json) == once);
}

TEST_CASE("metrics table mirrors the published row set") {
  const auto reports = published_reports();
  const auto md = render_metrics_table(reports, Format::markdown);
  for (const char* row : {"Sample Size (n)", "Paired t-test (p-value)", "t-statistic", "Wilcoxon Signed-Rank (p-value)",
                          "Effect Size (Cohen's d)", "Effect Size (Hedges' g)", "Bootstrap 95% CI (Mean Diff)",
                          "Bootstrap Point Estimate (E-F)", "Stochastic Dominance: FSD", "Stochastic Dominance (SSD)"}) {
    CHECK(md.find(row) != std::string::npos);
  }
  CHECK(md.find("not applicable: n too small") != std::string::npos);
  const auto csv = render_metrics_table(reports, Format::csv);
  CHECK(csv.starts_with("metric,1-Year,3-Year,5-Year,10-Year,20-Year\n"));
  CHECK(render_metrics_table(reports, Format::markdown) == md);
}

TEST_CASE("bundle JSON conforms to the documented schema") {
  const auto schema = nlohmann::json::parse(testing::slurp(std::string(SIPCRAFT_SOURCE_DIR) + "/docs/report.schema.json"));
  const auto reports = published_reports();
  nlohmann::json bundle;
  bundle["provenance"] = to_json(Provenance{"0.1.0", "x", sha256_hex("x"), "s", nlohmann::json::object()});
  bundle["windows"] = window_rows_to_json(testing::published_rows());
  bundle["metrics"] = nlohmann::json::array();
  for (const auto& r : reports) bundle["metrics"].push_back(comparison_to_json(r));
  bundle["boxplots"] = nlohmann::json::array({to_json(boxplot_summary(std::vector{1.0, 2.0, 30.0}, "b"))});
  const auto errors = testing::MiniSchema(schema).validate(bundle);
  for (const auto& e : errors) UNSCOPED_INFO(e);
  CHECK(errors.empty());
  nlohmann::json broken = bundle;
  broken["metrics"][0].erase("ssd");
  broken["metrics"][0]["t_test"]["p_value"] = 1.5;
  CHECK(testing::MiniSchema(schema).validate(broken).size() == 2);
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("boxplot summary") {
  const auto one = boxplot_summary(std::vector{7.0});
  CHECK(one.min == 7.0);
  CHECK(one.q1 == 7.0);
  CHECK(one.median == 7.0);
  CHECK(one.q3 == 7.0);
  CHECK(one.max == 7.0);

  std::vector<double> f1;
  for (const auto& r : testing::published_rows()) {
    if (r.years() == 1) f1.push_back(r.cagr_f);
  }
  const auto b = boxplot_summary(f1);
  CHECK(b.median == Catch::Approx(oracle_quantile(f1, 0.5)).margin(1e-12));
  CHECK(b.q1 == Catch::Approx(oracle_quantile(f1, 0.25)).margin(1e-12));
  CHECK(b.q3 == Catch::Approx(oracle_quantile(f1, 0.75)).margin(1e-12));
  CHECK(b.q1 <= b.median);
  CHECK(b.median <= b.q3);
  const double iqr = b.q3 - b.q1;
  for (double o : b.outliers) CHECK((o < b.q1 - 1.5 * iqr || o > b.q3 + 1.5 * iqr));
  for (double x : f1) {
    if (x >= b.q1 - 1.5 * iqr && x <= b.q3 + 1.5 * iqr) {
      CHECK(x >= b.whisker_low);
      CHECK(x <= b.whisker_high);
    }
  }
}
