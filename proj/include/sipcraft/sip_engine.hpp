// sip_engine.hpp
//
// Monthly systematic-investment simulation against a daily close series.
//
// A plan buys `monthly_amount / close` units on each of its 12*N execution
// dates (January of the start year through December of the final year) and is
// valued at the close of the final year's last trading day. CAGR is the
// annualised ratio of final value to total invested; it is not an IRR.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sipcraft/calendar.hpp"
#include "sipcraft/timeseries.hpp"

namespace sipcraft {

struct SipPlan {
  Strategy strategy = Strategy::ftd;
  int start_year = 0;
  int years = 1;
  double monthly_amount = 10000.0;

  int final_year() const { return start_year + years - 1; }
};

struct Execution {
  MonthKey month;
  Date date;
  double price;
  double units;
};

struct SipResult {
  SipPlan plan;
  double units = 0.0;
  double invested = 0.0;
  Date terminal_date;
  double terminal_close = 0.0;
  double final_value = 0.0;
  double cagr_percent = 0.0;
  std::vector<Execution> executions;
};

/// Raised when a plan's installment or terminal valuation cannot be priced.
class SimulationError : public std::runtime_error {
 public:
  SimulationError(const std::string& month, const std::string& reason);
  const std::string& month() const noexcept { return month_; }

 private:
  std::string month_;
};

/// ((final_value / invested)^(1/years) - 1) * 100.
double cagr(double final_value, double invested, int years);

SipResult simulate(const SipPlan& plan, const IndexSeries& series, const ScheduleTable& table);

/// Same CAGR through the amount-free form
/// ((terminal * sum(1/price_i) / (12N))^(1/N) - 1) * 100; never touches the
/// monthly amount.
double cagr_via_lemma(const SipPlan& plan, const IndexSeries& series, const ScheduleTable& table);

/// Audit ledger `month,date,price,units`.
std::string ledger_csv(const SipResult& result);

struct Window {
  int from_year = 0;
  int to_year = 0;

  int duration() const { return to_year - from_year + 1; }
  friend bool operator==(const Window&, const Window&) = default;
};

inline constexpr int kSupportedDurations[] = {1, 3, 5, 10, 20};

/// The fixed 2003-2024 calendar-year grid for durations 1, 3, 5, 10 and 20.
std::vector<Window> enumerate_windows(int duration);

struct PairedWindow {
  Window window;
  double cagr_ftd = 0.0;
  double cagr_exp = 0.0;

  double difference() const { return cagr_exp - cagr_ftd; }
};

/// Both strategies over every window of `duration`, ordered by start year.
/// `threads` > 1 evaluates windows concurrently; results do not depend on it.
std::vector<PairedWindow> paired_run(int duration, const IndexSeries& series,
                                     const ScheduleTable& table, double monthly_amount,
                                     unsigned threads = 1);

/// Runs an explicit window list; used by paired_run and by callers with custom grids.
std::vector<PairedWindow> paired_run(const std::vector<Window>& windows, const IndexSeries& series,
                                     const ScheduleTable& table, double monthly_amount,
                                     unsigned threads = 1);

/// First and last month any plan over `windows` touches (including the EXP
/// lead-in month).
MonthRange schedule_range_for(const std::vector<Window>& windows);

}  // namespace sipcraft
