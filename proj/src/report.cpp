// report.cpp

#include "sipcraft/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "sipcraft/stats/bootstrap.hpp"

namespace sipcraft::report {

namespace {

using stats::Cell;
using stats::ComparisonReport;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  while (true) {
    auto comma = line.find(',');
    out.push_back(trim(line.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return out;
}

template <typename T>
T parse_number(std::string_view s, std::size_t line, const char* what) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument(fmt::format("line {}: invalid {} '{}'", line, what, s));
  }
  return v;
}

std::string fixed(double x, int places) {
  std::string s = fmt::format("{:.{}f}", x, places);
  // fold negative zero
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string strategy_label(stats::Dominance d) {
  switch (d) {
    case stats::Dominance::exp_dominates: return "EXP-SIP";
    case stats::Dominance::ftd_dominates: return "FTD-SIP";
    case stats::Dominance::none: return "none";
  }
  return "none";
}

template <typename T>
std::string cell_text(const Cell<T>& c, auto&& render) {
  if (!c.ok()) return "not applicable: " + c.reason;
  return render(*c.value);
}

template <typename T>
nlohmann::json cell_json(const Cell<T>& c, auto&& render) {
  if (!c.ok()) return {{"applicable", false}, {"reason", c.reason}};
  nlohmann::json j = render(*c.value);
  j["applicable"] = true;
  return j;
}

nlohmann::json test_json(const stats::TestResult& t) {
  nlohmann::json j = {{"statistic", t.statistic},
                      {"p_value", t.p_value},
                      {"method", std::string(stats::to_string(t.method))}};
  if (t.df) j["df"] = *t.df;
  if (t.z) j["z"] = *t.z;
  return j;
}

nlohmann::json ks_json(const stats::KsResult& k) {
  return {{"statistic", k.statistic},
          {"p_value", k.p_value},
          {"alternative", std::string(stats::to_string(k.alternative))}};
}

}  // namespace

std::string_view to_string(Format f) {
  switch (f) {
    case Format::markdown: return "markdown";
    case Format::csv: return "csv";
    case Format::json: return "json";
  }
  return "markdown";
}

Format parse_format(std::string_view text) {
  if (text == "markdown" || text == "md") return Format::markdown;
  if (text == "csv") return Format::csv;
  if (text == "json") return Format::json;
  throw std::invalid_argument(fmt::format("unknown format '{}' (markdown, csv, json)", text));
}

std::string fixed2(double x) { return fixed(x, 2); }

double round2(double x) {
  const std::string s = fixed2(x);
  double v = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

std::optional<double> WindowRow::difference_of_rounded() const {
  const double dr = round2(round2(cagr_e) - round2(cagr_f));
  if (dr == round2(difference())) return std::nullopt;
  return dr;
}

WindowRow to_row(const PairedWindow& w) {
  return WindowRow{w.window.from_year, w.window.to_year, w.cagr_ftd, w.cagr_exp};
}

nlohmann::json window_rows_to_json(std::span<const WindowRow> rows) {
  auto arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j = {{"from", r.from_year},
                        {"to", r.to_year},
                        {"years", r.years()},
                        {"cagr_f", round2(r.cagr_f)},
                        {"cagr_e", round2(r.cagr_e)},
                        {"difference", round2(r.difference())},
                        {"cagr_f_full", r.cagr_f},
                        {"cagr_e_full", r.cagr_e}};
    if (auto dr = r.difference_of_rounded()) j["difference_of_rounded"] = *dr;
    arr.push_back(std::move(j));
  }
  return arr;
}

std::string render_window_table(std::span<const WindowRow> rows, Format format) {
  std::string out;
  std::vector<std::string> disagreements;
  for (const auto& r : rows) {
    if (auto dr = r.difference_of_rounded()) {
      disagreements.push_back(fmt::format("{}-{}: rounded difference {}, difference of rounded {}",
                                          r.from_year, r.to_year, fixed2(r.difference()), fixed2(*dr)));
    }
  }
  switch (format) {
    case Format::markdown:
      out += "| From | To | Years | CAGR (F) | CAGR (E) | Difference |\n";
      out += "|---:|---:|---:|---:|---:|---:|\n";
      for (const auto& r : rows) {
        out += fmt::format("| {} | {} | {} | {} | {} | {} |\n", r.from_year, r.to_year, r.years(),
                           fixed2(r.cagr_f), fixed2(r.cagr_e), fixed2(r.difference()));
      }
      out += fmt::format("\n{}.\n", kDifferenceConvention);
      for (const auto& d : disagreements) out += fmt::format("- {}\n", d);
      break;
    case Format::csv:
      out += "from,to,years,cagr_f,cagr_e,difference\n";
      for (const auto& r : rows) {
        out += fmt::format("{},{},{},{},{},{}\n", r.from_year, r.to_year, r.years(), fixed2(r.cagr_f),
                           fixed2(r.cagr_e), fixed2(r.difference()));
      }
      break;
    case Format::json: {
      nlohmann::json j = {{"rows", window_rows_to_json(rows)},
                          {"difference_convention", kDifferenceConvention}};
      out = j.dump(2) + "\n";
      break;
    }
  }
  return out;
}

std::vector<WindowRow> parse_window_csv(std::string_view text) {
  std::vector<WindowRow> rows;
  std::size_t line_no = 0;
  bool header = false;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    if (!header) {
      header = true;
      continue;
    }
    auto cells = split_csv(line);
    if (cells.size() < 5) throw std::invalid_argument(fmt::format("line {}: expected >= 5 columns", line_no));
    WindowRow r;
    r.from_year = parse_number<int>(cells[0], line_no, "from year");
    r.to_year = parse_number<int>(cells[1], line_no, "to year");
    const int years = parse_number<int>(cells[2], line_no, "years");
    r.cagr_f = parse_number<double>(cells[3], line_no, "CAGR (F)");
    r.cagr_e = parse_number<double>(cells[4], line_no, "CAGR (E)");
    if (r.to_year < r.from_year || years != r.years()) {
      throw std::invalid_argument(fmt::format("line {}: years {} inconsistent with {}-{}", line_no, years,
                                              r.from_year, r.to_year));
    }
    if (cells.size() > 5 && !cells[5].empty()) {
      const double diff = parse_number<double>(cells[5], line_no, "difference");
      const double expect = round2(r.difference());
      const double alt = r.difference_of_rounded().value_or(expect);
      if (std::fabs(diff - expect) > 1e-9 && std::fabs(diff - alt) > 1e-9) {
        throw std::invalid_argument(fmt::format("line {}: difference {} does not match CAGR(E) - CAGR(F) = {}",
                                                line_no, cells[5], fixed2(r.difference())));
      }
    }
    rows.push_back(r);
  }
  if (!header) throw std::invalid_argument("window table: missing header");
  return rows;
}

std::vector<WindowRow> parse_window_json(const nlohmann::json& j) {
  const nlohmann::json& arr = j.is_object() ? j.at("rows") : j;
  std::vector<WindowRow> rows;
  for (const auto& e : arr) {
    // full-precision values win so that render -> parse -> render is a fixed point
    WindowRow r{e.at("from").get<int>(), e.at("to").get<int>(),
                e.contains("cagr_f_full") ? e.at("cagr_f_full").get<double>() : e.at("cagr_f").get<double>(),
                e.contains("cagr_e_full") ? e.at("cagr_e_full").get<double>() : e.at("cagr_e").get<double>()};
    if (e.at("years").get<int>() != r.years()) throw std::invalid_argument("window json: inconsistent years");
    rows.push_back(r);
  }
  return rows;
}

nlohmann::json comparison_to_json(const ComparisonReport& r) {
  nlohmann::json j;
  j["horizon"] = r.horizon;
  j["n"] = r.n;
  j["mean_diff"] = r.mean_diff;
  j["t_test"] = cell_json(r.t_test, test_json);
  j["wilcoxon"] = cell_json(r.wilcoxon, test_json);
  j["wilcoxon_alternate"] = cell_json(r.wilcoxon_alternate, test_json);
  j["cohens_d"] = cell_json(r.cohens_d, [&](double d) {
    nlohmann::json o = {{"value", d}};
    if (r.effect_class.ok()) o["class"] = std::string(stats::to_string(*r.effect_class.value));
    return o;
  });
  j["hedges_g"] = cell_json(r.hedges_g, [&](double g) {
    return nlohmann::json{{"value", g}, {"variant", std::string(stats::to_string(r.hedges_variant))}};
  });
  j["bootstrap"] = cell_json(r.bootstrap, [](const stats::BootstrapCI& ci) {
    return nlohmann::json{{"point_estimate", ci.point_estimate},
                          {"lower", ci.lower},
                          {"upper", ci.upper},
                          {"resamples", ci.resamples},
                          {"seed", ci.seed},
                          {"alpha", ci.alpha},
                          {"z0", ci.z0},
                          {"acceleration", ci.acceleration}};
  });
  j["ks"] = cell_json(r.ks, ks_json);
  j["ks_two_sided"] = cell_json(r.ks_two_sided, ks_json);
  auto dom = [](stats::Dominance d) { return nlohmann::json{{"verdict", std::string(stats::to_string(d))}}; };
  j["fsd"] = cell_json(r.fsd, dom);
  j["ssd"] = cell_json(r.ssd, dom);
  j["notes"] = r.notes;
  return j;
}

std::string render_metrics_table(std::span<const ComparisonReport> reports, Format format) {
  if (format == Format::json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) arr.push_back(comparison_to_json(r));
    return nlohmann::json{{"reports", arr}}.dump(2) + "\n";
  }

  using Row = std::pair<std::string, std::vector<std::string>>;
  std::vector<Row> rows;
  auto add = [&](std::string name, auto&& per_report) {
    std::vector<std::string> cells;
    for (const auto& r : reports) cells.push_back(per_report(r));
    rows.emplace_back(std::move(name), std::move(cells));
  };
  auto p4 = [](const stats::TestResult& t) { return fixed(t.p_value, 4); };

  add("Sample Size (n)", [](const ComparisonReport& r) { return std::to_string(r.n); });
  add("Paired t-test (p-value)", [&](const ComparisonReport& r) { return cell_text(r.t_test, p4); });
  add("t-statistic", [](const ComparisonReport& r) {
    return cell_text(r.t_test, [](const stats::TestResult& t) { return fixed(t.statistic, 3); });
  });
  add("Wilcoxon Signed-Rank (p-value)", [](const ComparisonReport& r) {
    return cell_text(r.wilcoxon, [](const stats::TestResult& t) {
      return fmt::format("{} ({})", fixed(t.p_value, 4), stats::to_string(t.method));
    });
  });
  add("Effect Size (Cohen's d)", [](const ComparisonReport& r) {
    return cell_text(r.cohens_d, [&](double d) {
      return fmt::format("{} ({})", fixed(d, 3), stats::to_string(*r.effect_class.value));
    });
  });
  add("Effect Size (Hedges' g)", [](const ComparisonReport& r) {
    return cell_text(r.hedges_g, [&](double g) {
      return fmt::format("{} ({})", fixed(g, 3), stats::to_string(r.hedges_variant));
    });
  });
  add("Bootstrap 95% CI (Mean Diff)", [](const ComparisonReport& r) {
    return cell_text(r.bootstrap, [](const stats::BootstrapCI& ci) {
      return fmt::format("[{}, {}]", fixed(ci.lower, 3), fixed(ci.upper, 3));
    });
  });
  add("Bootstrap Point Estimate (E-F)", [](const ComparisonReport& r) {
    return cell_text(r.bootstrap, [](const stats::BootstrapCI& ci) { return fixed(ci.point_estimate, 3); });
  });
  add("Stochastic Dominance: FSD", [](const ComparisonReport& r) {
    return cell_text(r.fsd, [&](stats::Dominance d) {
      const std::string v = d == stats::Dominance::none ? "none" : strategy_label(d) + " FSD";
      if (!r.ks.ok()) return v;
      return fmt::format("{} (KS p={})", v, fixed(r.ks.value->p_value, 4));
    });
  });
  add("Stochastic Dominance (SSD)", [](const ComparisonReport& r) {
    return cell_text(r.ssd, [](stats::Dominance d) {
      return d == stats::Dominance::none ? std::string("none") : strategy_label(d) + " SSD";
    });
  });

  std::string out;
  if (format == Format::csv) {
    out += "metric";
    for (const auto& r : reports) out += "," + r.horizon;
    out += "\n";
    for (const auto& [name, cells] : rows) {
      out += '"' + name + '"';
      for (const auto& c : cells) out += ",\"" + c + '"';
      out += "\n";
    }
    return out;
  }

  out += "| Metric |";
  for (const auto& r : reports) out += " " + r.horizon + " |";
  out += "\n|---|";
  for (std::size_t i = 0; i < reports.size(); ++i) out += "---:|";
  out += "\n";
  for (const auto& [name, cells] : rows) {
    out += "| " + name + " |";
    for (const auto& c : cells) out += " " + c + " |";
    out += "\n";
  }
  out += "\n";
  for (const auto& r : reports) {
    if (r.wilcoxon_alternate.ok()) {
      out += fmt::format("- {}: Wilcoxon p ({}) = {}\n", r.horizon,
                         stats::to_string(r.wilcoxon_alternate.value->method),
                         fixed(r.wilcoxon_alternate.value->p_value, 4));
    }
    if (r.ks.ok() && r.ks_two_sided.ok()) {
      out += fmt::format("- {}: KS D = {} ({}), two-sided p = {}\n", r.horizon, fixed(r.ks.value->statistic, 4),
                         stats::to_string(r.ks.value->alternative), fixed(r.ks_two_sided.value->p_value, 4));
    }
    for (const auto& note : r.notes) out += fmt::format("- {}: {}\n", r.horizon, note);
  }
  return out;
}

BoxplotSummary boxplot_summary(std::span<const double> sample, std::string label) {
  if (sample.empty()) throw std::invalid_argument("boxplot of empty sample");
  std::vector<double> s(sample.begin(), sample.end());
  std::sort(s.begin(), s.end());
  BoxplotSummary b;
  b.label = std::move(label);
  b.n = s.size();
  b.min = s.front();
  b.max = s.back();
  b.q1 = stats::quantile_sorted(s, 0.25);
  b.median = stats::quantile_sorted(s, 0.5);
  b.q3 = stats::quantile_sorted(s, 0.75);
  const double iqr = b.q3 - b.q1;
  const double lo_fence = b.q1 - 1.5 * iqr;
  const double hi_fence = b.q3 + 1.5 * iqr;
  b.whisker_low = b.q1;
  b.whisker_high = b.q3;
  bool have_low = false;
  for (double v : s) {
    if (v < lo_fence || v > hi_fence) {
      b.outliers.push_back(v);
      continue;
    }
    if (!have_low) {
      b.whisker_low = v;
      have_low = true;
    }
    b.whisker_high = v;
  }
  return b;
}

nlohmann::json to_json(const BoxplotSummary& b) {
  return {{"label", b.label},   {"n", b.n},           {"min", b.min},
          {"q1", b.q1},         {"median", b.median}, {"q3", b.q3},
          {"max", b.max},       {"whisker_low", b.whisker_low},
          {"whisker_high", b.whisker_high},           {"outliers", b.outliers}};
}

nlohmann::json to_json(const Provenance& p) {
  return {{"tool_version", p.tool_version},
          {"data_source", p.data_source},
          {"data_sha256", p.data_sha256},
          {"schedule_source", p.schedule_source},
          {"config", p.config},
          {"quantile_convention", kQuantileConvention},
          {"difference_convention", kDifferenceConvention}};
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", digest[i]);
  return out;
}

}  // namespace sipcraft::report
