// sip_engine.cpp

#include "sipcraft/sip_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include <fmt/format.h>

namespace sipcraft {

namespace {

constexpr int kGridFirstYear = 2003;
constexpr int kGridLastYear = 2024;

void check_plan(const SipPlan& plan) {
  if (plan.years < 1) throw std::invalid_argument("plan years must be >= 1");
  if (!(plan.monthly_amount > 0.0) || !std::isfinite(plan.monthly_amount)) {
    throw std::invalid_argument("monthly amount must be positive");
  }
}

// Visits every installment in order as (month, execution date, close).
template <typename F>
void for_each_installment(const SipPlan& plan, const IndexSeries& series,
                          const ScheduleTable& table, F&& visit) {
  MonthKey key{plan.start_year, 1};
  for (int i = 0; i < 12 * plan.years; ++i, key = key.next()) {
    Date date;
    try {
      date = execution_date(plan.strategy, key, table);
    } catch (const ScheduleError& e) {
      throw SimulationError(key.str(), e.what());
    }
    double price = 0.0;
    try {
      price = series.close_on(date);
    } catch (const NotATradingDay& e) {
      throw SimulationError(key.str(), e.what());
    }
    visit(key, date, price);
  }
}

std::pair<Date, double> terminal_close(const SipPlan& plan, const IndexSeries& series) {
  try {
    const Date d = series.last_trading_day_of_year(plan.final_year());
    if (month_of(d) != 12) {
      throw CoverageError(fmt::format("series ends {} before December {}", format_iso_date(d),
                                      plan.final_year()));
    }
    return {d, series.close_on(d)};
  } catch (const CoverageError& e) {
    throw SimulationError(MonthKey{plan.final_year(), 12}.str(), e.what());
  }
}

}  // namespace

SimulationError::SimulationError(const std::string& month, const std::string& reason)
    : std::runtime_error(fmt::format("{}: {}", month, reason)), month_(month) {}

double cagr(double final_value, double invested, int years) {
  if (!(invested > 0.0)) throw std::invalid_argument("invested amount must be positive");
  if (final_value < 0.0) throw std::invalid_argument("final value must be non-negative");
  if (years < 1) throw std::invalid_argument("years must be >= 1");
  return (std::pow(final_value / invested, 1.0 / years) - 1.0) * 100.0;
}

SipResult simulate(const SipPlan& plan, const IndexSeries& series, const ScheduleTable& table) {
  check_plan(plan);
  SipResult r;
  r.plan = plan;
  r.executions.reserve(static_cast<std::size_t>(12 * plan.years));
  for_each_installment(plan, series, table, [&](const MonthKey& key, const Date& date, double price) {
    const double units = plan.monthly_amount / price;
    r.units += units;
    r.executions.push_back({key, date, price, units});
  });
  std::tie(r.terminal_date, r.terminal_close) = terminal_close(plan, series);
  r.invested = 12.0 * plan.monthly_amount * plan.years;
  r.final_value = r.terminal_close * r.units;
  r.cagr_percent = cagr(r.final_value, r.invested, plan.years);
  return r;
}

double cagr_via_lemma(const SipPlan& plan, const IndexSeries& series, const ScheduleTable& table) {
  if (plan.years < 1) throw std::invalid_argument("plan years must be >= 1");
  double inverse_sum = 0.0;
  for_each_installment(plan, series, table,
                       [&](const MonthKey&, const Date&, double price) { inverse_sum += 1.0 / price; });
  const double terminal = terminal_close(plan, series).second;
  const double ratio = terminal * inverse_sum / (12.0 * plan.years);
  return (std::pow(ratio, 1.0 / plan.years) - 1.0) * 100.0;
}

std::string ledger_csv(const SipResult& result) {
  std::string out = "month,date,price,units\n";
  for (const auto& e : result.executions) {
    out += fmt::format("{},{},{},{}\n", e.month.str(), format_iso_date(e.date), e.price, e.units);
  }
  return out;
}

std::vector<Window> enumerate_windows(int duration) {
  std::vector<Window> out;
  switch (duration) {
    case 1:
      for (int y = kGridFirstYear; y <= kGridLastYear; ++y) out.push_back({y, y});
      break;
    case 3:
      for (int y = 2004; y + 2 <= kGridLastYear; y += 3) out.push_back({y, y + 2});
      break;
    case 5:
      for (int y = 2005; y + 4 <= kGridLastYear; y += 5) out.push_back({y, y + 4});
      break;
    case 10:
      out = {{2005, 2014}, {2015, 2024}};
      break;
    case 20:
      out = {{2005, 2024}};
      break;
    default:
      throw std::invalid_argument(
          fmt::format("unsupported duration {} (expected 1, 3, 5, 10 or 20)", duration));
  }
  return out;
}

std::vector<PairedWindow> paired_run(int duration, const IndexSeries& series,
                                     const ScheduleTable& table, double monthly_amount,
                                     unsigned threads) {
  return paired_run(enumerate_windows(duration), series, table, monthly_amount, threads);
}

std::vector<PairedWindow> paired_run(const std::vector<Window>& windows, const IndexSeries& series,
                                     const ScheduleTable& table, double monthly_amount,
                                     unsigned threads) {
  std::vector<PairedWindow> rows(windows.size());
  std::vector<std::exception_ptr> errors(windows.size());

  auto work = [&](std::size_t i) {
    try {
      const Window& w = windows[i];
      SipPlan plan{Strategy::ftd, w.from_year, w.duration(), monthly_amount};
      rows[i].window = w;
      rows[i].cagr_ftd = simulate(plan, series, table).cagr_percent;
      plan.strategy = Strategy::exp;
      rows[i].cagr_exp = simulate(plan, series, table).cagr_percent;
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), windows.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < windows.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < windows.size(); i = next++) work(i);
      });
    }
  }
  // earliest failing window wins, independent of scheduling
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

MonthRange schedule_range_for(const std::vector<Window>& windows) {
  if (windows.empty()) throw std::invalid_argument("no windows");
  int lo = windows.front().from_year;
  int hi = windows.front().to_year;
  for (const auto& w : windows) {
    lo = std::min(lo, w.from_year);
    hi = std::max(hi, w.to_year);
  }
  return {MonthKey{lo - 1, 12}, MonthKey{hi, 12}};
}

}  // namespace sipcraft
