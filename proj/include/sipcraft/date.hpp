// date.hpp
//
// Calendar-date helpers on top of std::chrono::year_month_day.

#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace sipcraft {

using Date = std::chrono::year_month_day;

/// Parses a strict ISO-8601 calendar date ("YYYY-MM-DD"). Returns nullopt on
/// any malformed or non-existent date.
std::optional<Date> parse_iso_date(std::string_view text);

std::string format_iso_date(const Date& date);

inline Date make_date(int year, unsigned month, unsigned day) {
  return Date{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
}

inline int year_of(const Date& d) { return static_cast<int>(d.year()); }
inline unsigned month_of(const Date& d) { return static_cast<unsigned>(d.month()); }
inline unsigned day_of(const Date& d) { return static_cast<unsigned>(d.day()); }

inline Date add_days(const Date& d, int days) {
  return Date{std::chrono::sys_days{d} + std::chrono::days{days}};
}

inline std::chrono::weekday weekday_of(const Date& d) {
  return std::chrono::weekday{std::chrono::sys_days{d}};
}

}  // namespace sipcraft
