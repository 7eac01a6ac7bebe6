// timeseries.cpp

#include "sipcraft/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace sipcraft {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string_view next_field(std::string_view& rest) {
  auto comma = rest.find(',');
  std::string_view field = rest.substr(0, comma);
  rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
  return trim(field);
}

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

bool by_date(const TradingDay& a, const TradingDay& b) { return a.date < b.date; }

}  // namespace

SeriesParseError::SeriesParseError(std::size_t line, const std::string& reason)
    : std::runtime_error(fmt::format("line {}: {}", line, reason)), line_(line) {}

NotATradingDay::NotATradingDay(const Date& requested, std::optional<Date> preceding)
    : std::runtime_error(fmt::format(
          "{} is not a trading day{}", format_iso_date(requested),
          preceding ? fmt::format(" (nearest preceding trading day: {})", format_iso_date(*preceding))
                    : std::string{" (no earlier trading day in series)"})),
      requested_(requested),
      hint_(preceding) {}

IndexSeries::IndexSeries(std::vector<TradingDay> days) : days_(std::move(days)) {
  for (const auto& d : days_) {
    if (!d.date.ok()) throw std::invalid_argument("invalid calendar date in series");
    if (!std::isfinite(d.close) || d.close <= 0.0) {
      throw std::invalid_argument(
          fmt::format("non-positive close {} on {}", d.close, format_iso_date(d.date)));
    }
  }
  std::sort(days_.begin(), days_.end(), by_date);
  auto dup = std::adjacent_find(days_.begin(), days_.end(),
                                [](const auto& a, const auto& b) { return a.date == b.date; });
  if (dup != days_.end()) {
    throw std::invalid_argument(fmt::format("duplicate date {}", format_iso_date(dup->date)));
  }
}

const Date& IndexSeries::first_date() const {
  if (days_.empty()) throw CoverageError("empty series");
  return days_.front().date;
}

const Date& IndexSeries::last_date() const {
  if (days_.empty()) throw CoverageError("empty series");
  return days_.back().date;
}

std::vector<TradingDay>::const_iterator IndexSeries::lower(const Date& date) const {
  return std::lower_bound(days_.begin(), days_.end(), date,
                          [](const TradingDay& d, const Date& x) { return d.date < x; });
}

bool IndexSeries::contains(const Date& date) const {
  auto it = lower(date);
  return it != days_.end() && it->date == date;
}

double IndexSeries::close_on(const Date& date) const {
  auto it = lower(date);
  if (it != days_.end() && it->date == date) return it->close;
  std::optional<Date> hint;
  if (it != days_.begin()) hint = std::prev(it)->date;
  throw NotATradingDay(date, hint);
}

Date IndexSeries::last_trading_day_of_year(int year) const {
  auto it = lower(make_date(year + 1, 1, 1));
  if (it == days_.begin() || year_of(std::prev(it)->date) != year) {
    throw CoverageError(fmt::format("series has no trading days in {}", year));
  }
  return std::prev(it)->date;
}

std::span<const TradingDay> IndexSeries::month_days(int year, unsigned month) const {
  const Date first = make_date(year, month, 1);
  const Date next = month == 12 ? make_date(year + 1, 1, 1) : make_date(year, month + 1, 1);
  auto b = lower(first);
  auto e = lower(next);
  return {b, e};
}

IndexSeries parse_series(std::istream& in) {
  std::vector<TradingDay> rows;
  std::vector<std::size_t> lines;
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (line_no == 1 && line.substr(0, 3) == "\xEF\xBB\xBF") line.remove_prefix(3);
    line = trim(line);
    if (line.empty()) continue;
    std::string_view rest = line;
    std::string_view date_field = next_field(rest);
    if (!header_seen) {
      header_seen = true;
      if (parse_iso_date(date_field)) throw SeriesParseError(line_no, "missing header row");
      continue;
    }
    std::string_view close_field = next_field(rest);
    auto date = parse_iso_date(date_field);
    if (!date) {
      throw SeriesParseError(line_no, fmt::format("malformed date '{}'", date_field));
    }
    double close = 0.0;
    if (!parse_double(close_field, close) || !std::isfinite(close)) {
      throw SeriesParseError(line_no, fmt::format("non-numeric close '{}'", close_field));
    }
    if (close <= 0.0) {
      throw SeriesParseError(line_no, fmt::format("non-positive close {}", close_field));
    }
    rows.push_back({*date, close});
    lines.push_back(line_no);
  }
  if (!header_seen) throw SeriesParseError(1, "missing header row");

  std::vector<std::size_t> order(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rows[a].date < rows[b].date; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (rows[order[i]].date == rows[order[i - 1]].date) {
      // reported against the later of the two lines
      throw SeriesParseError(std::max(lines[order[i]], lines[order[i - 1]]),
                             fmt::format("duplicate date {}", format_iso_date(rows[order[i]].date)));
    }
  }
  return IndexSeries(std::move(rows));
}

IndexSeries parse_series(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_series(in);
}

IndexSeries load_series_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open series file: " + path);
  return parse_series(in);
}

std::string serialize_series(const IndexSeries& series) {
  std::string out = "date,close\n";
  for (const auto& d : series.days()) {
    out += fmt::format("{},{}\n", format_iso_date(d.date), d.close);
  }
  return out;
}

}  // namespace sipcraft
