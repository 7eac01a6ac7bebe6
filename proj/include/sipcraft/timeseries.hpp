// timeseries.hpp
//
// Daily index close series: ingestion, validation and exact-date lookup.
// A date is a trading day iff it appears in the series; nothing here infers
// exchange holidays.

#pragma once

#include <cstddef>
#include <istream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sipcraft/date.hpp"

namespace sipcraft {

struct TradingDay {
  Date date;
  double close;  // index points, > 0

  friend bool operator==(const TradingDay&, const TradingDay&) = default;
};

/// Malformed input row. `line` is 1-based and counts the header.
class SeriesParseError : public std::runtime_error {
 public:
  SeriesParseError(std::size_t line, const std::string& reason);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Requested date has no close in the series.
class NotATradingDay : public std::runtime_error {
 public:
  NotATradingDay(const Date& requested, std::optional<Date> preceding);
  const Date& requested() const noexcept { return requested_; }
  /// Nearest trading date strictly before the requested one, if any.
  const std::optional<Date>& hint() const noexcept { return hint_; }

 private:
  Date requested_;
  std::optional<Date> hint_;
};

/// Series does not reach the requested year / month.
class CoverageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable, strictly ascending daily close series.
class IndexSeries {
 public:
  IndexSeries() = default;

  /// Sorts `days` ascending. Throws std::invalid_argument on duplicate dates,
  /// non-positive or non-finite closes, or invalid dates.
  explicit IndexSeries(std::vector<TradingDay> days);

  std::span<const TradingDay> days() const noexcept { return days_; }
  std::size_t size() const noexcept { return days_.size(); }
  bool empty() const noexcept { return days_.empty(); }
  const Date& first_date() const;
  const Date& last_date() const;

  bool contains(const Date& date) const;

  /// Exact close on `date`; never interpolates.
  double close_on(const Date& date) const;

  /// Latest series date within `year`.
  Date last_trading_day_of_year(int year) const;

  /// Days within the calendar month, ascending (may be empty).
  std::span<const TradingDay> month_days(int year, unsigned month) const;

  friend bool operator==(const IndexSeries&, const IndexSeries&) = default;

 private:
  std::vector<TradingDay>::const_iterator lower(const Date& date) const;

  std::vector<TradingDay> days_;
};

/// Reads CSV with a required header; first two columns are date,close and any
/// further columns are ignored. Accepts \n and \r\n. Rows may be ascending or
/// descending.
IndexSeries parse_series(std::istream& in);
IndexSeries parse_series(std::string_view text);
IndexSeries load_series_file(const std::string& path);

/// Writes `date,close` CSV with enough digits to round-trip every close.
std::string serialize_series(const IndexSeries& series);

inline double close_on(const IndexSeries& s, const Date& d) { return s.close_on(d); }
inline Date last_trading_day_of_year(const IndexSeries& s, int year) {
  return s.last_trading_day_of_year(year);
}

}  // namespace sipcraft
