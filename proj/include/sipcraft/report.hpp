// report.hpp
//
// Table rendering for window results and comparison batteries, plus
// plot-ready boxplot statistics. Output is byte-deterministic.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "sipcraft/sip_engine.hpp"
#include "sipcraft/stats/battery.hpp"

namespace sipcraft::report {

enum class Format { markdown, csv, json };
std::string_view to_string(Format f);
Format parse_format(std::string_view text);

/// Half-even decimal rounding of the binary value to 2 places ("-0.00" folds to 0).
double round2(double x);
std::string fixed2(double x);

/// One window, CAGRs kept at full precision. Rendering rounds each column on
/// its own; `difference` is rounded from the full-precision subtraction.
struct WindowRow {
  int from_year = 0;
  int to_year = 0;
  double cagr_f = 0.0;
  double cagr_e = 0.0;

  int years() const { return to_year - from_year + 1; }
  double difference() const { return cagr_e - cagr_f; }
  /// round2(e) - round2(f), when that differs from round2(e - f).
  std::optional<double> difference_of_rounded() const;

  friend bool operator==(const WindowRow&, const WindowRow&) = default;
};

WindowRow to_row(const PairedWindow& w);

std::string render_window_table(std::span<const WindowRow> rows, Format format);
nlohmann::json window_rows_to_json(std::span<const WindowRow> rows);

/// Parses `from,to,years,cagr_f,cagr_e,difference` CSV (header required).
/// `years` must match the bounds; `difference`, when present, must equal the
/// rounded full-precision difference or the difference of rounded values.
std::vector<WindowRow> parse_window_csv(std::string_view text);
std::vector<WindowRow> parse_window_json(const nlohmann::json& j);

std::string render_metrics_table(std::span<const stats::ComparisonReport> reports, Format format);
nlohmann::json comparison_to_json(const stats::ComparisonReport& r);

struct BoxplotSummary {
  std::string label;
  std::size_t n = 0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double whisker_low = 0.0;   // most extreme point >= q1 - 1.5 IQR
  double whisker_high = 0.0;  // most extreme point <= q3 + 1.5 IQR
  std::vector<double> outliers;
};

/// Type-7 quartiles, 1.5 * IQR whisker rule.
BoxplotSummary boxplot_summary(std::span<const double> sample, std::string label = {});
nlohmann::json to_json(const BoxplotSummary& b);

struct Provenance {
  std::string tool_version;
  std::string data_source;   // path or "published-table"
  std::string data_sha256;
  std::string schedule_source;
  nlohmann::json config;
};

nlohmann::json to_json(const Provenance& p);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kQuantileConvention = "type-7 (linear interpolation between order statistics)";
inline constexpr std::string_view kDifferenceConvention =
    "Difference is the full-precision CAGR(E) - CAGR(F) rounded to 2 decimals";

}  // namespace sipcraft::report
