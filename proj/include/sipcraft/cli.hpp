// cli.hpp
//
// Command surface: validate, simulate, compare, fixtures.
//
// Exit status contract: 0 success, 1 validation anomalies or data that cannot
// be simulated, 2 I/O or configuration errors.

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "sipcraft/report.hpp"
#include "sipcraft/stats/battery.hpp"

namespace sipcraft::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAnomalies = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  std::optional<std::string> data_path;
  std::optional<std::string> schedule_path;
  std::optional<std::string> windows_path;  // published per-window CAGR table
  std::vector<int> durations = {1, 3, 5, 10, 20};
  double monthly_amount = 10000.0;
  stats::BatteryConfig stats;
  report::Format format = report::Format::markdown;
  std::optional<std::string> out_path;
};

/// Applies a JSON config object onto `base`. Unknown keys are an error.
RunConfig run_config_from_json(const nlohmann::json& j, RunConfig base = {});
nlohmann::json to_json(const RunConfig& c);

/// Entry point shared by the executable and the tests. `args` excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sipcraft::cli
