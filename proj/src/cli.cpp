// cli.cpp

#include "sipcraft/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"

#include "sipcraft/calendar.hpp"
#include "sipcraft/sip_engine.hpp"
#include "sipcraft/timeseries.hpp"

namespace sipcraft::cli {

namespace {

namespace fs = std::filesystem;

/// I/O or configuration problem; maps to exit 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError(fmt::format("cannot read '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError(fmt::format("cannot write '{}'", path.string()));
  out << content;
}

std::vector<int> parse_durations(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int d = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(d);
    } catch (const std::exception&) {
      throw UsageError(fmt::format("invalid duration '{}'", item));
    }
  }
  return out;
}

void check_durations(const std::vector<int>& durations) {
  if (durations.empty()) throw UsageError("durations must not be empty");
  static const std::set<int> allowed(std::begin(kSupportedDurations), std::end(kSupportedDurations));
  std::set<int> seen;
  for (int d : durations) {
    if (!allowed.contains(d)) throw UsageError(fmt::format("unsupported duration {} (1, 3, 5, 10, 20)", d));
    if (!seen.insert(d).second) throw UsageError(fmt::format("duplicate duration {}", d));
  }
}

std::string horizon_label(int duration) { return fmt::format("{}-Year", duration); }

struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> data;
  std::optional<std::string> schedule;
  std::optional<std::string> windows;
  std::optional<std::string> durations;
  std::optional<double> amount;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> resamples;
  std::optional<double> alpha;
  std::optional<std::string> wilcoxon_mode;
  std::optional<std::string> hedges_variant;
  std::optional<std::string> ks_alternative;
  std::optional<unsigned> threads;
  std::optional<std::string> format;
  std::optional<std::string> out;
};

void add_common_flags(CLI::App* cmd, Flags& f, bool with_stats) {
  cmd->add_option("--config", f.config, "JSON config file (flags override it)");
  cmd->add_option("--data", f.data, "daily close CSV (date,close)");
  cmd->add_option("--schedule", f.schedule, "schedule override CSV (year,month,ftd_dom,expiry_dom)");
  cmd->add_option("--format", f.format, "markdown | csv | json");
  cmd->add_option("--out", f.out, "output file (simulate/validate) or directory (compare)");
  cmd->add_option("--amount", f.amount, "monthly contribution");
  cmd->add_option("--threads", f.threads, "worker threads for window simulation and resampling");
  if (with_stats) {
    cmd->add_option("--windows", f.windows, "per-window CAGR table (from,to,years,cagr_f,cagr_e,difference)");
    cmd->add_option("--durations", f.durations, "comma-separated subset of 1,3,5,10,20");
    cmd->add_option("--seed", f.seed, "bootstrap seed (fallback: SIPCRAFT_SEED, then 42)");
    cmd->add_option("--resamples", f.resamples, "bootstrap resamples");
    cmd->add_option("--alpha", f.alpha, "two-sided tail mass of the bootstrap interval");
    cmd->add_option("--wilcoxon-mode", f.wilcoxon_mode, "auto | exact | normal_approx");
    cmd->add_option("--hedges-variant", f.hedges_variant, "standard | paper_compat");
    cmd->add_option("--ks-alternative", f.ks_alternative, "greater | two_sided");
  }
}

RunConfig effective_config(const Flags& f) {
  RunConfig c;
  if (const char* env = std::getenv("SIPCRAFT_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      c.stats.seed = std::stoull(env, &used);
      if (used != std::string_view(env).size()) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw UsageError(fmt::format("SIPCRAFT_SEED is not an unsigned integer: '{}'", env));
    }
  }
  if (f.config) {
    try {
      c = run_config_from_json(nlohmann::json::parse(read_file(*f.config)), c);
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(fmt::format("config '{}': {}", *f.config, e.what()));
    } catch (const std::invalid_argument& e) {
      throw UsageError(fmt::format("config '{}': {}", *f.config, e.what()));
    }
  }
  try {
    if (f.data) c.data_path = f.data;
    if (f.schedule) c.schedule_path = f.schedule;
    if (f.windows) c.windows_path = f.windows;
    if (f.durations) c.durations = parse_durations(*f.durations);
    if (f.amount) c.monthly_amount = *f.amount;
    if (f.seed) c.stats.seed = *f.seed;
    if (f.resamples) c.stats.resamples = *f.resamples;
    if (f.alpha) c.stats.alpha = *f.alpha;
    if (f.wilcoxon_mode) c.stats.wilcoxon_mode = stats::parse_wilcoxon_mode(*f.wilcoxon_mode);
    if (f.hedges_variant) c.stats.hedges_variant = stats::parse_hedges_variant(*f.hedges_variant);
    if (f.ks_alternative) c.stats.ks_alternative = stats::parse_ks_alternative(*f.ks_alternative);
    if (f.threads) c.stats.threads = *f.threads;
    if (f.format) c.format = report::parse_format(*f.format);
    if (f.out) c.out_path = f.out;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (!(c.monthly_amount > 0.0)) throw UsageError("amount must be positive");
  if (c.stats.resamples < stats::kMinResamples) {
    throw UsageError(fmt::format("resamples must be >= {}", stats::kMinResamples));
  }
  if (!(c.stats.alpha > 0.0 && c.stats.alpha < 1.0)) throw UsageError("alpha must be in (0, 1)");
  check_durations(c.durations);
  return c;
}

struct LoadedSeries {
  IndexSeries series;
  std::string sha256;
};

LoadedSeries load_series(const RunConfig& c) {
  if (!c.data_path) throw UsageError("--data is required");
  const std::string bytes = read_file(*c.data_path);
  return {parse_series(std::string_view(bytes)), report::sha256_hex(bytes)};
}

std::optional<ScheduleTable> load_overrides(const RunConfig& c) {
  if (!c.schedule_path) return std::nullopt;
  return load_schedule_overrides(std::string_view(read_file(*c.schedule_path)));
}

std::string schedule_source(const RunConfig& c) {
  return c.schedule_path ? fmt::format("override:{} (gaps computed)", *c.schedule_path)
                         : std::string("computed (first trading day; last Thursday, backward holiday adjustment)");
}

void emit(const RunConfig& c, const std::string& content, std::ostream& out) {
  if (c.out_path) {
    write_file(*c.out_path, content);
  } else {
    out << content;
  }
}

void warn_anomalies(const std::vector<ScheduleAnomaly>& anomalies, std::ostream& err) {
  for (const auto& a : anomalies) {
    err << fmt::format("warning: {} {}: {}{}\n", a.month.str(), a.field, a.reason,
                       a.date ? " (" + format_iso_date(*a.date) + ")" : std::string{});
  }
}

// ---- validate -------------------------------------------------------------

int cmd_validate(const RunConfig& c, std::ostream& out) {
  if (!c.data_path) throw UsageError("--data is required");
  const std::string bytes = read_file(*c.data_path);
  std::string schedule_bytes;
  if (c.schedule_path) schedule_bytes = read_file(*c.schedule_path);

  nlohmann::json report = {{"data", *c.data_path}};
  auto anomalies = nlohmann::json::array();

  std::optional<IndexSeries> series;
  try {
    series = parse_series(std::string_view(bytes));
    if (series->empty()) throw SeriesParseError(1, "series has no rows");
  } catch (const SeriesParseError& e) {
    anomalies.push_back({{"month", nullptr}, {"field", "series"}, {"date", nullptr}, {"reason", e.what()}});
    series.reset();
  }

  std::optional<ScheduleTable> overrides;
  if (c.schedule_path) {
    try {
      overrides = load_schedule_overrides(std::string_view(schedule_bytes));
    } catch (const ScheduleFormatError& e) {
      for (const auto& issue : e.issues()) {
        anomalies.push_back({{"month", nullptr},
                             {"field", "override_row"},
                             {"date", nullptr},
                             {"reason", fmt::format("line {}: {}", issue.line, issue.reason)}});
      }
    }
  }

  if (series) {
    const MonthRange range{MonthKey{year_of(series->first_date()), month_of(series->first_date())},
                           MonthKey{year_of(series->last_date()), month_of(series->last_date())}};
    const ScheduleBuild build = build_schedule(*series, overrides ? &*overrides : nullptr, range);
    for (auto& a : anomalies_to_json(build.anomalies)) anomalies.push_back(std::move(a));
    report["series"] = {{"first", format_iso_date(series->first_date())},
                        {"last", format_iso_date(series->last_date())},
                        {"days", series->size()}};
    report["months"] = build.table.size();
  }
  report["schedule_source"] = schedule_source(c);
  report["valid"] = anomalies.empty();
  report["anomalies"] = anomalies;
  emit(c, report.dump(2) + "\n", out);
  return anomalies.empty() ? kExitOk : kExitAnomalies;
}

// ---- simulate -------------------------------------------------------------

int cmd_simulate(const RunConfig& c, Strategy strategy, int start_year, int years, std::ostream& out,
                 std::ostream& err) {
  if (years < 1) throw UsageError("--years must be >= 1");
  const LoadedSeries loaded = load_series(c);
  const auto overrides = load_overrides(c);
  const SipPlan plan{strategy, start_year, years, c.monthly_amount};
  const MonthRange range{MonthKey{start_year - 1, 12}, MonthKey{plan.final_year(), 12}};
  const ScheduleBuild build = build_schedule(loaded.series, overrides ? &*overrides : nullptr, range);
  warn_anomalies(build.anomalies, err);

  const SipResult r = simulate(plan, loaded.series, build.table);

  const report::Provenance prov{std::string(report::kToolVersion), *c.data_path, loaded.sha256,
                                schedule_source(c), to_json(c)};
  std::string text;
  switch (c.format) {
    case report::Format::csv:
      text = ledger_csv(r);
      text += fmt::format("\nmetric,value\nstrategy,{}\nstart_year,{}\nyears,{}\nmonthly_amount,{}\n",
                          to_string(strategy), start_year, years, c.monthly_amount);
      text += fmt::format("units,{}\ninvested,{}\nterminal_date,{}\nterminal_close,{}\nfinal_value,{}\ncagr_percent,{}\n",
                          r.units, r.invested, format_iso_date(r.terminal_date), r.terminal_close,
                          r.final_value, report::fixed2(r.cagr_percent));
      break;
    case report::Format::json: {
      auto execs = nlohmann::json::array();
      for (const auto& e : r.executions) {
        execs.push_back({{"month", e.month.str()},
                         {"date", format_iso_date(e.date)},
                         {"price", e.price},
                         {"units", e.units}});
      }
      nlohmann::json j = {{"plan",
                           {{"strategy", std::string(to_string(strategy))},
                            {"start_year", start_year},
                            {"years", years},
                            {"monthly_amount", c.monthly_amount}}},
                          {"units", r.units},
                          {"invested", r.invested},
                          {"terminal_date", format_iso_date(r.terminal_date)},
                          {"terminal_close", r.terminal_close},
                          {"final_value", r.final_value},
                          {"cagr_percent", r.cagr_percent},
                          {"cagr_percent_2dp", report::round2(r.cagr_percent)},
                          {"executions", execs},
                          {"provenance", report::to_json(prov)}};
      text = j.dump(2) + "\n";
      break;
    }
    case report::Format::markdown:
      text = fmt::format("# {} plan {}-{} ({} year{})\n\n", to_string(strategy), start_year, plan.final_year(),
                         years, years == 1 ? "" : "s");
      text += "| Month | Date | Close | Units |\n|---|---|---:|---:|\n";
      for (const auto& e : r.executions) {
        text += fmt::format("| {} | {} | {:.4f} | {:.6f} |\n", e.month.str(), format_iso_date(e.date), e.price,
                            e.units);
      }
      text += fmt::format(
          "\n- Units: {:.6f}\n- Invested: {:.2f}\n- Terminal close ({}): {:.4f}\n- Final value: {:.2f}\n"
          "- CAGR: {}%\n",
          r.units, r.invested, format_iso_date(r.terminal_date), r.terminal_close, r.final_value,
          report::fixed2(r.cagr_percent));
      break;
  }
  emit(c, text, out);
  return kExitOk;
}

// ---- compare --------------------------------------------------------------

int cmd_compare(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.data_path && c.windows_path) throw UsageError("--data and --windows are mutually exclusive");
  if (!c.data_path && !c.windows_path) throw UsageError("one of --data or --windows is required");

  std::vector<int> durations = c.durations;
  std::sort(durations.begin(), durations.end());

  std::map<int, std::vector<report::WindowRow>> rows_by_duration;
  report::Provenance prov{std::string(report::kToolVersion), "", "", "", to_json(c)};

  if (c.windows_path) {
    const std::string bytes = read_file(*c.windows_path);
    std::vector<report::WindowRow> all;
    try {
      all = report::parse_window_csv(bytes);
    } catch (const std::invalid_argument& e) {
      err << "error: " << *c.windows_path << ": " << e.what() << "\n";
      return kExitAnomalies;
    }
    for (const auto& r : all) rows_by_duration[r.years()].push_back(r);
    for (auto& [d, rows] : rows_by_duration) {
      std::stable_sort(rows.begin(), rows.end(),
                       [](const auto& a, const auto& b) { return a.from_year < b.from_year; });
    }
    prov.data_source = "windows:" + *c.windows_path;
    prov.data_sha256 = report::sha256_hex(bytes);
    prov.schedule_source = "not used (precomputed window CAGRs)";
  } else {
    const LoadedSeries loaded = load_series(c);
    const auto overrides = load_overrides(c);
    std::vector<Window> all_windows;
    for (int d : durations) {
      for (const auto& w : enumerate_windows(d)) all_windows.push_back(w);
    }
    const ScheduleBuild build =
        build_schedule(loaded.series, overrides ? &*overrides : nullptr, schedule_range_for(all_windows));
    warn_anomalies(build.anomalies, err);
    for (int d : durations) {
      for (const auto& pw : paired_run(d, loaded.series, build.table, c.monthly_amount, c.stats.threads)) {
        rows_by_duration[d].push_back(report::to_row(pw));
      }
    }
    prov.data_source = *c.data_path;
    prov.data_sha256 = loaded.sha256;
    prov.schedule_source = schedule_source(c);
  }

  std::vector<stats::ComparisonReport> reports;
  std::vector<report::BoxplotSummary> boxplots;
  std::vector<report::WindowRow> all_rows;
  for (int d : durations) {
    const auto& rows = rows_by_duration[d];
    if (rows.empty()) {
      err << fmt::format("error: no windows of {} year(s) in input\n", d);
      return kExitAnomalies;
    }
    std::vector<double> e;
    std::vector<double> f;
    for (const auto& r : rows) {
      e.push_back(r.cagr_e);
      f.push_back(r.cagr_f);
      all_rows.push_back(r);
    }
    auto rep = stats::run_battery(stats::PairedSample(e, f), c.stats, horizon_label(d));
    if (d == 20 || rows.size() < 2) rep.notes.push_back("reported descriptively only; too few windows for inference");
    reports.push_back(std::move(rep));
    boxplots.push_back(report::boxplot_summary(f, horizon_label(d) + " FTD"));
    boxplots.push_back(report::boxplot_summary(e, horizon_label(d) + " EXP"));
  }

  nlohmann::json bundle;
  bundle["provenance"] = report::to_json(prov);
  bundle["windows"] = report::window_rows_to_json(all_rows);
  bundle["metrics"] = nlohmann::json::array();
  for (const auto& r : reports) bundle["metrics"].push_back(report::comparison_to_json(r));
  bundle["boxplots"] = nlohmann::json::array();
  for (const auto& b : boxplots) bundle["boxplots"].push_back(report::to_json(b));
  const std::string bundle_text = bundle.dump(2) + "\n";

  auto windows_text = [&](report::Format fmt_) {
    if (fmt_ != report::Format::markdown) return report::render_window_table(all_rows, fmt_);
    std::string s;
    for (int d : durations) {
      s += fmt::format("## Window results: {}\n\n", horizon_label(d));
      s += report::render_window_table(rows_by_duration[d], fmt_) + "\n";
    }
    return s;
  };

  if (c.out_path) {
    const fs::path dir(*c.out_path);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw UsageError(fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
    const std::string ext = c.format == report::Format::markdown ? "md" : std::string(report::to_string(c.format));
    write_file(dir / ("windows." + ext), windows_text(c.format));
    write_file(dir / ("metrics." + ext), report::render_metrics_table(reports, c.format));
    nlohmann::json bp = nlohmann::json::array();
    for (const auto& b : boxplots) bp.push_back(report::to_json(b));
    write_file(dir / "boxplots.json", bp.dump(2) + "\n");
    write_file(dir / "bundle.json", bundle_text);
    return kExitOk;
  }

  switch (c.format) {
    case report::Format::json:
      out << bundle_text;
      break;
    case report::Format::csv:
      out << windows_text(c.format) << "\n" << report::render_metrics_table(reports, c.format);
      break;
    case report::Format::markdown:
      out << windows_text(c.format) << "## Comparison metrics\n\n"
          << report::render_metrics_table(reports, c.format) << "\n## Provenance\n\n```json\n"
          << report::to_json(prov).dump(2) << "\n```\n";
      break;
  }
  return kExitOk;
}

// ---- fixtures -------------------------------------------------------------

struct FixtureOptions {
  std::string kind = "walk";
  std::string from = "2002-12-01";
  std::string to = "2024-12-31";
  std::uint64_t seed = 7;
  double level = 1000.0;
  double drop_rate = 0.0;
  std::optional<std::string> out;
  std::optional<std::string> schedule_out;
};

int cmd_fixtures(const FixtureOptions& opt, std::ostream& out) {
  const auto from = parse_iso_date(opt.from);
  const auto to = parse_iso_date(opt.to);
  if (!from || !to || *to < *from) throw UsageError("--from/--to must be ISO dates with from <= to");
  if (opt.kind != "flat" && opt.kind != "walk") throw UsageError("--kind must be flat or walk");
  if (!(opt.level > 0.0)) throw UsageError("--level must be positive");
  if (opt.drop_rate < 0.0 || opt.drop_rate >= 1.0) throw UsageError("--drop-rate must be in [0, 1)");

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> step(0.0004, 0.012);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<TradingDay> days;
  double level = opt.level;
  for (Date d = *from; d <= *to; d = add_days(d, 1)) {
    const auto wd = weekday_of(d);
    if (wd == std::chrono::Saturday || wd == std::chrono::Sunday) continue;
    if (opt.drop_rate > 0.0 && coin(rng) < opt.drop_rate) continue;
    if (opt.kind == "walk") level *= std::exp(step(rng));
    days.push_back({d, opt.kind == "walk" ? std::round(level * 100.0) / 100.0 : opt.level});
  }
  const IndexSeries series(std::move(days));
  const std::string text = serialize_series(series);
  if (opt.out) {
    write_file(*opt.out, text);
  } else {
    out << text;
  }

  if (opt.schedule_out && !series.empty()) {
    const MonthRange range{MonthKey{year_of(series.first_date()), month_of(series.first_date())},
                           MonthKey{year_of(series.last_date()), month_of(series.last_date())}};
    const ScheduleBuild build = build_schedule(series, nullptr, range);
    std::string csv = "year,month,ftd_dom,expiry_dom\n";
    for (const auto& [key, e] : build.table.entries()) {
      csv += fmt::format("{},{},{},{}\n", key.year, key.month,
                         e.first_trading_day ? std::to_string(day_of(*e.first_trading_day)) : "",
                         e.expiry_day ? std::to_string(day_of(*e.expiry_day)) : "");
    }
    write_file(*opt.schedule_out, csv);
  }
  return kExitOk;
}

}  // namespace

RunConfig run_config_from_json(const nlohmann::json& j, RunConfig c) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  static const std::set<std::string> known = {"data",   "schedule", "windows", "durations",
                                              "amount", "stats",    "format",  "out"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw std::invalid_argument(fmt::format("unknown config key '{}'", key));
  }
  if (j.contains("data")) c.data_path = j.at("data").get<std::string>();
  if (j.contains("schedule")) c.schedule_path = j.at("schedule").get<std::string>();
  if (j.contains("windows")) c.windows_path = j.at("windows").get<std::string>();
  if (j.contains("durations")) c.durations = j.at("durations").get<std::vector<int>>();
  if (j.contains("amount")) c.monthly_amount = j.at("amount").get<double>();
  if (j.contains("stats")) c.stats = stats::battery_config_from_json(j.at("stats"), c.stats);
  if (j.contains("format")) c.format = report::parse_format(j.at("format").get<std::string>());
  if (j.contains("out")) c.out_path = j.at("out").get<std::string>();
  return c;
}

nlohmann::json to_json(const RunConfig& c) {
  auto opt = [](const std::optional<std::string>& s) { return s ? nlohmann::json(*s) : nlohmann::json(nullptr); };
  return {{"data", opt(c.data_path)},
          {"schedule", opt(c.schedule_path)},
          {"windows", opt(c.windows_path)},
          {"durations", c.durations},
          {"amount", c.monthly_amount},
          {"stats", stats::to_json(c.stats)},
          {"format", std::string(report::to_string(c.format))}};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"sipcraft: SIP timing backtests and paired comparison statistics", "sipcraft"};
  app.require_subcommand(1);

  Flags vflags;
  auto* validate = app.add_subcommand("validate", "check a series and its schedule anchors");
  add_common_flags(validate, vflags, false);

  Flags sflags;
  std::string strategy_text;
  int start_year = 0;
  int years = 1;
  auto* simulate_cmd = app.add_subcommand("simulate", "simulate one plan and print its ledger");
  add_common_flags(simulate_cmd, sflags, false);
  simulate_cmd->add_option("--strategy", strategy_text, "FTD | EXP")->required();
  simulate_cmd->add_option("--start", start_year, "first calendar year")->required();
  simulate_cmd->add_option("--years", years, "plan length in years");

  Flags cflags;
  auto* compare = app.add_subcommand("compare", "paired comparison over the window grid");
  add_common_flags(compare, cflags, true);

  FixtureOptions fx;
  auto* fixtures = app.add_subcommand("fixtures", "generate a synthetic weekday close series");
  fixtures->add_option("--kind", fx.kind, "flat | walk");
  fixtures->add_option("--from", fx.from, "first date");
  fixtures->add_option("--to", fx.to, "last date");
  fixtures->add_option("--seed", fx.seed, "generator seed");
  fixtures->add_option("--level", fx.level, "starting (or flat) level");
  fixtures->add_option("--drop-rate", fx.drop_rate, "fraction of weekdays removed as holidays");
  fixtures->add_option("--out", fx.out, "output CSV (default stdout)");
  fixtures->add_option("--schedule-out", fx.schedule_out, "also write the computed schedule as override CSV");

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("sipcraft");
  for (const auto& a : args) argv_store.push_back(a);
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(effective_config(vflags), out);
    if (simulate_cmd->parsed()) {
      Strategy strategy;
      try {
        strategy = parse_strategy(strategy_text);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      return cmd_simulate(effective_config(sflags), strategy, start_year, years, out, err);
    }
    if (compare->parsed()) return cmd_compare(effective_config(cflags), out, err);
    if (fixtures->parsed()) return cmd_fixtures(fx, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SimulationError& e) {
    err << "error: simulation failed at " << e.what() << "\n";
    return kExitAnomalies;
  } catch (const SeriesParseError& e) {
    err << "error: series " << e.what() << "\n";
    return kExitAnomalies;
  } catch (const ScheduleFormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitAnomalies;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitAnomalies;
  }
  return kExitUsage;
}

}  // namespace sipcraft::cli
