// calendar.cpp

#include "sipcraft/calendar.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include "json.hpp"

namespace sipcraft {

namespace {

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
bool parse_int(std::string_view s, T& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

std::string_view to_string(Strategy s) { return s == Strategy::ftd ? "FTD" : "EXP"; }

Strategy parse_strategy(std::string_view text) {
  if (text == "FTD" || text == "ftd") return Strategy::ftd;
  if (text == "EXP" || text == "exp") return Strategy::exp;
  throw std::invalid_argument(fmt::format("unknown strategy '{}' (expected FTD or EXP)", text));
}

std::string_view to_string(AnchorSource s) {
  return s == AnchorSource::override_table ? "override" : "computed";
}

MonthKey::MonthKey(int y, unsigned m) : year(y), month(m) {
  if (m < 1 || m > 12) throw std::invalid_argument(fmt::format("month {} out of range", m));
}

MonthKey MonthKey::next() const { return month == 12 ? MonthKey{year + 1, 1} : MonthKey{year, month + 1}; }
MonthKey MonthKey::prev() const { return month == 1 ? MonthKey{year - 1, 12} : MonthKey{year, month - 1}; }
std::string MonthKey::str() const { return fmt::format("{:04d}-{:02d}", year, month); }

std::vector<MonthKey> MonthRange::months() const {
  std::vector<MonthKey> out;
  for (MonthKey k = first; k <= last; k = k.next()) out.push_back(k);
  return out;
}

ScheduleFormatError::ScheduleFormatError(std::vector<Issue> issues)
    : std::runtime_error([&] {
        std::string msg = fmt::format("schedule overrides rejected ({} issue{})", issues.size(),
                                      issues.size() == 1 ? "" : "s");
        for (const auto& i : issues) msg += fmt::format("\n  line {}: {}", i.line, i.reason);
        return msg;
      }()),
      issues_(std::move(issues)) {}

void ScheduleTable::insert(MonthSchedule entry) {
  auto key = entry.key;
  if (!entries_.emplace(key, std::move(entry)).second) {
    throw ScheduleError(fmt::format("duplicate schedule entry for {}", key.str()));
  }
}

const MonthSchedule* ScheduleTable::find(const MonthKey& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

const MonthSchedule& ScheduleTable::at(const MonthKey& key) const {
  if (const auto* e = find(key)) return *e;
  throw ScheduleError(fmt::format("no schedule entry for {}", key.str()));
}

nlohmann::json anomalies_to_json(const std::vector<ScheduleAnomaly>& anomalies) {
  auto out = nlohmann::json::array();
  for (const auto& a : anomalies) {
    out.push_back({{"month", a.month.str()},
                   {"field", a.field},
                   {"date", a.date ? nlohmann::json(format_iso_date(*a.date)) : nlohmann::json(nullptr)},
                   {"reason", a.reason}});
  }
  return out;
}

Date resolve_first_trading_day(const IndexSeries& series, const MonthKey& key) {
  auto days = series.month_days(key.year, key.month);
  if (days.empty()) throw CoverageError(fmt::format("no trading days in {}", key.str()));
  return days.front().date;
}

Date compute_expiry(const IndexSeries& series, const MonthKey& key) {
  using namespace std::chrono;
  const Date last_thursday{sys_days{year_month_weekday_last{
      year{key.year}, month{key.month}, weekday_last{Thursday}}}};
  for (Date d = last_thursday; key.contains(d); d = add_days(d, -1)) {
    if (series.contains(d)) return d;
  }
  throw CoverageError(fmt::format("no trading day on or before the last Thursday of {}", key.str()));
}

ScheduleTable load_schedule_overrides(std::istream& in) {
  ScheduleTable table;
  std::vector<ScheduleFormatError::Issue> issues;
  std::set<MonthKey> seen;
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;

  auto day_in_month = [](int y, unsigned m, std::string_view cell,
                         std::string& err) -> std::optional<Date> {
    unsigned dom = 0;
    if (!parse_int(cell, dom)) {
      err = fmt::format("day-of-month '{}' is not an integer", cell);
      return std::nullopt;
    }
    Date d = make_date(y, m, dom);
    if (!d.ok()) {
      err = fmt::format("day {} does not exist in {:04d}-{:02d}", dom, y, m);
      return std::nullopt;
    }
    return d;
  };

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    auto cells = split_csv(line);
    if (cells.size() < 4) {
      issues.push_back({line_no, "expected 4 columns year,month,ftd_dom,expiry_dom"});
      continue;
    }
    int year = 0;
    unsigned month = 0;
    if (!parse_int(cells[0], year) || !parse_int(cells[1], month) || month < 1 || month > 12) {
      issues.push_back({line_no, fmt::format("invalid year/month '{},{}'", cells[0], cells[1])});
      continue;
    }
    MonthKey key{year, month};
    if (!seen.insert(key).second) {
      issues.push_back({line_no, fmt::format("duplicate entry for {}", key.str())});
      continue;
    }
    if (cells[2].empty() && cells[3].empty()) {
      issues.push_back({line_no, fmt::format("no dates given for {}", key.str())});
      continue;
    }
    MonthSchedule entry{.key = key,
                        .first_trading_day = std::nullopt,
                        .expiry_day = std::nullopt,
                        .ftd_source = AnchorSource::computed,
                        .expiry_source = AnchorSource::computed};
    bool ok = true;
    std::string err;
    if (!cells[2].empty()) {
      if (auto d = day_in_month(year, month, cells[2], err)) {
        entry.first_trading_day = d;
        entry.ftd_source = AnchorSource::override_table;
      } else {
        issues.push_back({line_no, "ftd: " + err});
        ok = false;
      }
    }
    if (!cells[3].empty()) {
      if (auto d = day_in_month(year, month, cells[3], err)) {
        entry.expiry_day = d;
        entry.expiry_source = AnchorSource::override_table;
      } else {
        issues.push_back({line_no, "expiry: " + err});
        ok = false;
      }
    }
    if (ok) table.insert(std::move(entry));
  }
  if (!issues.empty()) throw ScheduleFormatError(std::move(issues));
  return table;
}

ScheduleTable load_schedule_overrides(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_schedule_overrides(in);
}

ScheduleTable load_schedule_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open schedule file: " + path);
  return load_schedule_overrides(in);
}

ScheduleBuild build_schedule(const IndexSeries& series, const ScheduleTable* overrides,
                             const MonthRange& range) {
  ScheduleBuild out;
  for (const MonthKey& key : range.months()) {
    MonthSchedule entry{.key = key,
                        .first_trading_day = std::nullopt,
                        .expiry_day = std::nullopt,
                        .ftd_source = AnchorSource::computed,
                        .expiry_source = AnchorSource::computed};
    const MonthSchedule* ov = overrides ? overrides->find(key) : nullptr;

    auto resolve = [&](const std::optional<Date>& override_date, std::optional<Date>& slot,
                       AnchorSource& source, const char* field, auto compute) {
      if (override_date) {
        slot = override_date;
        source = AnchorSource::override_table;
        if (!series.contains(*override_date)) {
          out.anomalies.push_back({key, field, override_date, "override date is not a trading day in the series"});
        }
        return;
      }
      try {
        slot = compute(series, key);
        source = AnchorSource::computed;
      } catch (const CoverageError& e) {
        out.anomalies.push_back({key, field, std::nullopt, e.what()});
      }
    };

    resolve(ov ? ov->first_trading_day : std::nullopt, entry.first_trading_day, entry.ftd_source,
            "first_trading_day", resolve_first_trading_day);
    resolve(ov ? ov->expiry_day : std::nullopt, entry.expiry_day, entry.expiry_source,
            "expiry_day", compute_expiry);

    if (entry.first_trading_day && entry.expiry_day && *entry.expiry_day < *entry.first_trading_day) {
      out.anomalies.push_back({key, "expiry_day", entry.expiry_day, "expiry precedes first trading day"});
    }
    out.table.insert(std::move(entry));
  }
  return out;
}

Date execution_date(Strategy strategy, const MonthKey& key, const ScheduleTable& table) {
  if (strategy == Strategy::ftd) {
    const auto* e = table.find(key);
    if (!e || !e->first_trading_day) {
      throw ScheduleError(fmt::format("no first trading day for {}", key.str()));
    }
    return *e->first_trading_day;
  }
  const MonthKey prev = key.prev();
  const auto* e = table.find(prev);
  if (!e || !e->expiry_day) {
    throw ScheduleError(fmt::format("no expiry day for {} (needed by EXP installment of {})",
                                    prev.str(), key.str()));
  }
  return *e->expiry_day;
}

}  // namespace sipcraft
