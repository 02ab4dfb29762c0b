#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mpqkd/keyrate.hpp"

namespace mpqkd {

struct PointEvaluation {
  PairCountTable table;
  DecoyBounds bounds;
  KeyRateResult result;
};

// Click model -> analytic counts -> estimator for scenario.mode -> key rate.
PointEvaluation evaluate_point_full(const ScenarioConfig& scenario);
PointEvaluation evaluate_point_full(const ScenarioConfig& scenario, const ClickModel& clicks);
KeyRateResult evaluate_point(const ScenarioConfig& scenario);

struct PSaveOptimum {
  double p_save = 1.0;
  double R = 0.0;
  KeyRateResult result;
  std::size_t evaluations = 0;
};

inline constexpr std::size_t kDefaultPSaveResolution = 40;
inline constexpr double kPSaveMin = 1e-3;
inline constexpr double kGoldenTolerance = 1e-4;

std::vector<double> p_save_grid(std::size_t resolution);

// Grid scan over log-spaced p_save in [1e-3, 1], then golden-section refinement
// inside the bracket around the best grid point. Ties resolve to the smaller p_save.
PSaveOptimum optimize_p_save(const ScenarioConfig& scenario, std::size_t resolution = kDefaultPSaveResolution,
                             bool refine = true);

enum class SweepVariable { kDistance, kRounds, kInterval, kPSave };
std::string_view to_string(SweepVariable v);

struct SweepSpec {
  std::string name = "sweep";
  ScenarioConfig base;
  SweepVariable variable = SweepVariable::kDistance;
  std::vector<double> values;
  std::vector<StrategyKind> strategies{StrategyKind::kOriginal, StrategyKind::kFlexible};
  bool optimize_p_save = true;
  std::size_t p_save_resolution = kDefaultPSaveResolution;

  void validate() const;
};

struct StrategyPoint {
  StrategyKind kind = StrategyKind::kFlexible;
  ScenarioConfig scenario;  // with the p_save actually used
  KeyRateResult result;
  std::string error;
};

struct SweepPoint {
  double value = 0.0;
  std::vector<StrategyPoint> strategies;
  double improvement = 0.0;

  const StrategyPoint* find(StrategyKind k) const;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepPoint> points;
};

// R_flex / R_orig − 1; +inf when R_orig = 0 < R_flex; NaN when both are 0.
double improvement_ratio(double r_flex, double r_orig);

std::vector<double> distance_grid(double from_km = 0.0, double to_km = 600.0, double step_km = 5.0);

SweepResult run_sweep(const SweepSpec& spec);

void write_sweep_csv(const SweepResult& result, std::ostream& os);

// Canned sweeps for the standard figures: fig2 ... fig7.
std::vector<SweepSpec> figure_preset(std::string_view name, const ScenarioConfig& base);
std::vector<std::string> figure_names();

}  // namespace mpqkd
