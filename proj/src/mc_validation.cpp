#include "mpqkd/mc_validation.hpp"

#include <algorithm>
#include <cmath>

namespace mpqkd {

double normal_two_sided_p(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

double poisson_two_sided_p(double k, double lambda) {
  if (lambda <= 0.0) return k == 0.0 ? 1.0 : 0.0;
  if (lambda >= 100.0) return normal_two_sided_p((k - lambda) / std::sqrt(lambda));
  const auto n = static_cast<long>(std::llround(k));
  auto log_pmf = [lambda](long i) { return i * std::log(lambda) - lambda - std::lgamma(i + 1.0); };
  double below = 0.0, above = 0.0;  // P(X <= n), P(X >= n)
  for (long i = 0; i <= n; ++i) below += std::exp(log_pmf(i));
  for (long i = n;; ++i) {
    const double t = std::exp(log_pmf(i));
    above += t;
    if (i > lambda && t <= above * 1e-17) break;
  }
  return std::min(1.0, 2.0 * std::min(below, above));
}

bool McValidation::passed() const {
  return std::all_of(counts.begin(), counts.end(), [](const CountCheck& c) { return c.passed; }) &&
         std::all_of(stats.begin(), stats.end(), [](const StatCheck& s) { return s.passed; });
}

McValidation compare_mc_to_analytic(const ScenarioConfig& scenario, const MonteCarloRun& run, double count_sigmas,
                                    double stat_sigmas) {
  McValidation v;
  v.scenario = scenario;
  v.scenario.misalignment.enabled = false;
  v.scenario.rounds = static_cast<double>(run.rounds);
  v.run = run;
  v.count_sigmas = count_sigmas;
  v.stat_sigmas = stat_sigmas;
  const ClickModel clicks = build_click_model(v.scenario);
  v.analytic = analytic_pair_counts(v.scenario, clicks);

  const double p_threshold = normal_two_sided_p(count_sigmas);
  const auto observed = run.table.named();
  const auto expected = v.analytic.named();
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double lam = expected[i].second;
    if (!(lam > 0.0)) continue;
    CountCheck c;
    c.name = expected[i].first;
    c.expected = lam;
    c.observed = observed[i].second;
    c.z = (c.observed - lam) / std::sqrt(lam);
    c.p_value = poisson_two_sided_p(c.observed, lam);
    c.passed = c.p_value >= p_threshold;
    v.counts.push_back(c);
  }

  auto stat = [&](std::string name, double expect, double obs, double sigma) {
    StatCheck s{std::move(name), expect, obs, sigma, 0.0, false};
    s.z = sigma > 0 ? (obs - expect) / sigma : (obs == expect ? 0.0 : INFINITY);
    s.passed = std::abs(s.z) <= stat_sigmas;
    v.stats.push_back(s);
  };
  const double q = clicks.q_kept();
  const std::uint64_t l = v.scenario.strategy.interval;
  stat("pairing_efficiency", analytic_pairing_efficiency(q, l), run.pairing_efficiency, run.pairing_efficiency_sigma);
  stat("t_mean", mean_pairing_interval(q, l, v.scenario.misalignment.clock_hz), run.t_mean, run.t_mean_sigma);
  return v;
}

McValidation validate_monte_carlo(const ScenarioConfig& scenario, std::uint64_t seed, std::uint64_t rounds,
                                  double count_sigmas, double stat_sigmas) {
  ScenarioConfig sc = scenario;
  sc.misalignment.enabled = false;
  return compare_mc_to_analytic(sc, run_monte_carlo(sc, seed, rounds), count_sigmas, stat_sigmas);
}

}  // namespace mpqkd
