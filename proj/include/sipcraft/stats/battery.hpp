// battery.hpp
//
// Runs every comparison on one horizon's paired sample. A statistic that cannot
// be computed (too few windows, zero spread) becomes a "not applicable" cell
// carrying the reason; the battery itself never throws on degenerate data.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "sipcraft/stats/bootstrap.hpp"
#include "sipcraft/stats/dominance.hpp"
#include "sipcraft/stats/paired.hpp"

namespace sipcraft::stats {

struct BatteryConfig {
  std::size_t resamples = 10000;
  double alpha = 0.05;
  std::uint64_t seed = 42;
  WilcoxonMode wilcoxon_mode = WilcoxonMode::automatic;
  HedgesVariant hedges_variant = HedgesVariant::standard;
  KsAlternative ks_alternative = KsAlternative::greater;
  unsigned threads = 1;
};

/// Unknown keys are rejected; missing keys keep their defaults.
BatteryConfig battery_config_from_json(const nlohmann::json& j, BatteryConfig base = {});
nlohmann::json to_json(const BatteryConfig& c);

/// A value, or the reason it is not applicable.
template <typename T>
struct Cell {
  std::optional<T> value;
  std::string reason;

  bool ok() const { return value.has_value(); }
  static Cell na(std::string why) { return Cell{std::nullopt, std::move(why)}; }
};

struct ComparisonReport {
  std::string horizon;
  std::size_t n = 0;
  double mean_diff = 0.0;

  Cell<TestResult> t_test;
  Cell<TestResult> wilcoxon;            // configured mode
  Cell<TestResult> wilcoxon_alternate;  // the other method, for comparison
  Cell<double> cohens_d;
  Cell<EffectClass> effect_class;
  Cell<double> hedges_g;
  HedgesVariant hedges_variant = HedgesVariant::standard;
  Cell<BootstrapCI> bootstrap;
  Cell<KsResult> ks;
  Cell<KsResult> ks_two_sided;
  Cell<Dominance> fsd;
  Cell<Dominance> ssd;
  std::vector<std::string> notes;
};

ComparisonReport run_battery(const PairedSample& s, const BatteryConfig& config,
                             std::string horizon = {});

}  // namespace sipcraft::stats
