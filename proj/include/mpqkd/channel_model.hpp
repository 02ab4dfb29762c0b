#pragma once

#include <array>
#include <cstddef>
#include <numbers>

#include "mpqkd/scenario.hpp"

namespace mpqkd {

inline constexpr std::size_t kDefaultQuadraturePoints = 1024;

// Mean of a 2π-periodic function by the trapezoid rule on `points` nodes.
template <class F>
double periodic_mean(F&& f, std::size_t points = kDefaultQuadraturePoints) {
  const double h = 2.0 * std::numbers::pi / static_cast<double>(points);
  double sum = 0.0;
  for (std::size_t k = 0; k < points; ++k) sum += f(h * static_cast<double>(k));
  return sum / static_cast<double>(points);
}

struct EffectiveIntensities {
  double left = 0.0;
  double right = 0.0;
};

struct ClickProbs {
  double left = 0.0;
  double right = 0.0;
  double effective() const { return left + right; }
};

EffectiveIntensities effective_intensities(double tau_a, double tau_b, double delta,
                                           const LinkModel& link, const DetectorModel& det);

ClickProbs click_probs(double tau_a, double tau_b, double delta, const LinkModel& link,
                       const DetectorModel& det);

// Faster variant for callers that already hold the received intensities η_a·τ_a and η_b·τ_b.
ClickProbs click_probs_received(double xa, double xb, double delta, const DetectorModel& det);

double avg_effective_prob(double tau_a, double tau_b, const LinkModel& link, const DetectorModel& det,
                          std::size_t points = kDefaultQuadraturePoints);

class ClickModel {
 public:
  ClickModel(const ScenarioConfig& scenario, std::size_t points = kDefaultQuadraturePoints);

  // Same click table under a different pairing strategy (the q table does not depend on it).
  ClickModel with_strategy(const StrategyConfig& strategy) const;

  double q(Intensity a, Intensity b) const { return q_[idx(a)][idx(b)]; }
  double q0() const { return q0_; }
  double q_kept() const { return q_kept_; }
  std::size_t quadrature_points() const { return points_; }

  // δ-dependent single-round click probabilities for the intensity choices (a, b).
  ClickProbs at(Intensity a, Intensity b, double delta) const;
  double received(Intensity a, Intensity b, bool alice) const;

  const ScenarioConfig& scenario() const { return scenario_; }

 private:
  ScenarioConfig scenario_;
  std::size_t points_;
  std::array<std::array<double, 3>, 3> q_{};
  double q0_ = 0.0;
  double q_kept_ = 0.0;
};

ClickModel build_click_model(const ScenarioConfig& scenario);

}  // namespace mpqkd
