// battery.cpp

#include "sipcraft/stats/battery.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

namespace sipcraft::stats {

namespace {

template <typename T, typename F>
Cell<T> attempt(F&& f) {
  try {
    return Cell<T>{f(), {}};
  } catch (const DegenerateSample& e) {
    return Cell<T>::na(fmt::format("degenerate: {}", e.what()));
  } catch (const InsufficientData& e) {
    return Cell<T>::na(fmt::format("n too small: {}", e.what()));
  }
}

}  // namespace

BatteryConfig battery_config_from_json(const nlohmann::json& j, BatteryConfig c) {
  if (!j.is_object()) throw std::invalid_argument("battery config must be a JSON object");
  static const std::set<std::string> known = {"B",       "alpha",          "seed",
                                              "wilcoxon_mode", "hedges_variant", "ks_alternative",
                                              "threads"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw std::invalid_argument(fmt::format("unknown stats config key '{}'", key));
  }
  if (j.contains("B")) c.resamples = j.at("B").get<std::size_t>();
  if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("wilcoxon_mode")) c.wilcoxon_mode = parse_wilcoxon_mode(j.at("wilcoxon_mode").get<std::string>());
  if (j.contains("hedges_variant")) c.hedges_variant = parse_hedges_variant(j.at("hedges_variant").get<std::string>());
  if (j.contains("ks_alternative")) c.ks_alternative = parse_ks_alternative(j.at("ks_alternative").get<std::string>());
  if (j.contains("threads")) c.threads = j.at("threads").get<unsigned>();
  return c;
}

nlohmann::json to_json(const BatteryConfig& c) {
  return {{"B", c.resamples},
          {"alpha", c.alpha},
          {"seed", c.seed},
          {"wilcoxon_mode", std::string(to_string(c.wilcoxon_mode))},
          {"hedges_variant", std::string(to_string(c.hedges_variant))},
          {"ks_alternative", std::string(to_string(c.ks_alternative))},
          {"threads", c.threads}};
}

ComparisonReport run_battery(const PairedSample& s, const BatteryConfig& config, std::string horizon) {
  ComparisonReport r;
  r.horizon = std::move(horizon);
  r.n = s.size();
  r.hedges_variant = config.hedges_variant;

  auto all_na = [&](const std::string& why) {
    r.t_test = Cell<TestResult>::na(why);
    r.wilcoxon = Cell<TestResult>::na(why);
    r.wilcoxon_alternate = Cell<TestResult>::na(why);
    r.cohens_d = Cell<double>::na(why);
    r.effect_class = Cell<EffectClass>::na(why);
    r.hedges_g = Cell<double>::na(why);
    r.bootstrap = Cell<BootstrapCI>::na(why);
    r.ks = Cell<KsResult>::na(why);
    r.ks_two_sided = Cell<KsResult>::na(why);
    r.fsd = Cell<Dominance>::na(why);
    r.ssd = Cell<Dominance>::na(why);
  };

  if (r.n < 2) {
    if (r.n == 1) r.mean_diff = s.diffs()[0];
    all_na(fmt::format("n too small: {} paired window{} (descriptive only)", r.n, r.n == 1 ? "" : "s"));
    return r;
  }
  r.mean_diff = mean(s.diffs());
  const auto diffs = s.diffs();
  if (drop_zero_diffs(diffs).empty()) {
    all_na("degenerate: all differences are zero");
    return r;
  }

  r.t_test = attempt<TestResult>([&] { return paired_t_one_tailed(diffs); });
  r.wilcoxon = attempt<TestResult>([&] { return wilcoxon_signed_rank(diffs, config.wilcoxon_mode); });
  if (r.wilcoxon.ok()) {
    const auto other = r.wilcoxon.value->method == TestMethod::exact ? WilcoxonMode::normal_approx
                                                                      : WilcoxonMode::exact;
    r.wilcoxon_alternate = attempt<TestResult>([&] { return wilcoxon_signed_rank(diffs, other); });
  } else {
    r.wilcoxon_alternate = r.wilcoxon;
  }
  r.cohens_d = attempt<double>([&] { return cohens_d(diffs); });
  if (r.cohens_d.ok()) {
    r.effect_class = Cell<EffectClass>{classify_effect(*r.cohens_d.value), {}};
    r.hedges_g = attempt<double>([&] { return hedges_g(*r.cohens_d.value, r.n, config.hedges_variant); });
  } else {
    r.effect_class = Cell<EffectClass>::na(r.cohens_d.reason);
    r.hedges_g = Cell<double>::na(r.cohens_d.reason);
  }
  r.bootstrap = attempt<BootstrapCI>([&] {
    auto ci = bootstrap_bca(diffs, config.resamples, config.alpha, config.seed, config.threads);
    if (ci.degenerate) throw DegenerateSample("all differences identical; interval collapses to the point");
    return ci;
  });
  r.ks = attempt<KsResult>([&] { return ks_two_sample(s.exp_values(), s.ftd_values(), config.ks_alternative); });
  r.ks_two_sided = attempt<KsResult>(
      [&] { return ks_two_sample(s.exp_values(), s.ftd_values(), KsAlternative::two_sided); });
  r.fsd = attempt<Dominance>([&] { return check_fsd(s); });
  r.ssd = attempt<Dominance>([&] { return check_ssd(s); });
  return r;
}

}  // namespace sipcraft::stats
