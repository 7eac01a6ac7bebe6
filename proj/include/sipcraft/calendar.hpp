// calendar.hpp
//
// Monthly execution anchors: the first trading day of each month and the
// monthly derivatives expiry (last Thursday, moved backward to the previous
// trading day when the exchange is closed). An override table transcribed from
// exchange-published dates wins over the computed rule; every resulting date
// is validated against the price series and problems are reported, never
// repaired.

#pragma once

#include <compare>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "sipcraft/date.hpp"
#include "sipcraft/timeseries.hpp"

namespace sipcraft {

enum class Strategy { ftd, exp };

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view text);

struct MonthKey {
  int year = 0;
  unsigned month = 1;  // 1..12

  MonthKey() = default;
  MonthKey(int y, unsigned m);

  MonthKey next() const;
  MonthKey prev() const;
  bool contains(const Date& d) const { return year_of(d) == year && month_of(d) == month; }
  std::string str() const;  // "YYYY-MM"

  friend auto operator<=>(const MonthKey&, const MonthKey&) = default;
};

struct MonthRange {
  MonthKey first;
  MonthKey last;  // inclusive

  std::vector<MonthKey> months() const;
};

enum class AnchorSource { override_table, computed };

std::string_view to_string(AnchorSource s);

struct MonthSchedule {
  MonthKey key;
  std::optional<Date> first_trading_day;
  std::optional<Date> expiry_day;
  AnchorSource ftd_source = AnchorSource::computed;
  AnchorSource expiry_source = AnchorSource::computed;

  friend bool operator==(const MonthSchedule&, const MonthSchedule&) = default;
};

class ScheduleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Override file rejected. Every bad row is listed, not just the first.
class ScheduleFormatError : public std::runtime_error {
 public:
  struct Issue {
    std::size_t line;
    std::string reason;
  };
  explicit ScheduleFormatError(std::vector<Issue> issues);
  const std::vector<Issue>& issues() const noexcept { return issues_; }

 private:
  std::vector<Issue> issues_;
};

class ScheduleTable {
 public:
  /// Throws ScheduleError on duplicate keys.
  void insert(MonthSchedule entry);

  const MonthSchedule* find(const MonthKey& key) const;
  const MonthSchedule& at(const MonthKey& key) const;

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::map<MonthKey, MonthSchedule>& entries() const noexcept { return entries_; }

  friend bool operator==(const ScheduleTable&, const ScheduleTable&) = default;

 private:
  std::map<MonthKey, MonthSchedule> entries_;
};

struct ScheduleAnomaly {
  MonthKey month;
  std::string field;  // "first_trading_day" | "expiry_day"
  std::optional<Date> date;
  std::string reason;
};

nlohmann::json anomalies_to_json(const std::vector<ScheduleAnomaly>& anomalies);

struct ScheduleBuild {
  ScheduleTable table;
  std::vector<ScheduleAnomaly> anomalies;

  bool clean() const noexcept { return anomalies.empty(); }
};

/// Earliest series date within the month.
Date resolve_first_trading_day(const IndexSeries& series, const MonthKey& key);

/// Last Thursday of the month if it trades, else the nearest earlier trading
/// day within the same month.
Date compute_expiry(const IndexSeries& series, const MonthKey& key);

/// CSV `year,month,ftd_dom,expiry_dom` with header. Either day-of-month may be
/// blank; a blank cell leaves that anchor to the computed rule.
ScheduleTable load_schedule_overrides(std::istream& in);
ScheduleTable load_schedule_overrides(std::string_view text);
ScheduleTable load_schedule_file(const std::string& path);

/// Resolves every month of `range`, per field: override first, else the
/// computed rule. Override dates missing from the series, unresolvable months
/// and expiry-before-FTD months are collected in `anomalies`; the table keeps
/// whatever the override said.
ScheduleBuild build_schedule(const IndexSeries& series, const ScheduleTable* overrides,
                             const MonthRange& range);

/// FTD: first trading day of `key`. EXP: expiry day of the month before `key`.
Date execution_date(Strategy strategy, const MonthKey& key, const ScheduleTable& table);

}  // namespace sipcraft
