#pragma once

#include <string>
#include <vector>

#include "mpqkd/monte_carlo.hpp"

namespace mpqkd {

// Two-sided tail probability of observing `k` under Poisson(lambda).
// Exact summation below lambda = 100, normal approximation above.
double poisson_two_sided_p(double k, double lambda);

// Two-sided normal tail probability of a z-score.
double normal_two_sided_p(double z);

struct CountCheck {
  std::string name;
  double expected = 0.0;
  double observed = 0.0;
  double z = 0.0;        // (observed − expected)/√expected, for reporting
  double p_value = 1.0;  // two-sided Poisson tail
  bool passed = true;
};

struct StatCheck {
  std::string name;
  double expected = 0.0;
  double observed = 0.0;
  double sigma = 0.0;
  double z = 0.0;
  bool passed = true;
};

struct McValidation {
  ScenarioConfig scenario;  // analytic reference scenario (ideal interference)
  MonteCarloRun run;
  PairCountTable analytic;
  double count_sigmas = 5.0;
  double stat_sigmas = 3.0;
  std::vector<CountCheck> counts;
  std::vector<StatCheck> stats;
  bool passed() const;
};

// Compares every nonzero analytic count with the MC count at the Poisson tail level of
// `count_sigmas` normal standard deviations, and r, T_mean within `stat_sigmas`.
McValidation compare_mc_to_analytic(const ScenarioConfig& scenario, const MonteCarloRun& run,
                                    double count_sigmas = 5.0, double stat_sigmas = 3.0);

// Runs the MC and compares. Misalignment is switched off on both sides.
McValidation validate_monte_carlo(const ScenarioConfig& scenario, std::uint64_t seed, std::uint64_t rounds,
                                  double count_sigmas = 5.0, double stat_sigmas = 3.0);

}  // namespace mpqkd
