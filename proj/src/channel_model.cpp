#include "mpqkd/channel_model.hpp"

#include <algorithm>
#include <cmath>

#include "mpqkd/labels.hpp"

namespace mpqkd {

EffectiveIntensities effective_intensities(double tau_a, double tau_b, double delta,
                                           const LinkModel& link, const DetectorModel& det) {
  const double xa = link.eta_a() * tau_a;
  const double xb = link.eta_b() * tau_b;
  const double cross = 2.0 * std::sqrt(xa * xb) * std::cos(delta);
  // Rounding can leave a tiny negative value at full destructive interference.
  return {std::max(0.0, det.eta_d0 / 2.0 * (xa + xb + cross)),
          std::max(0.0, det.eta_d1 / 2.0 * (xa + xb - cross))};
}

ClickProbs click_probs_received(double xa, double xb, double delta, const DetectorModel& det) {
  const double cross = 2.0 * std::sqrt(xa * xb) * std::cos(delta);
  const double tl = std::max(0.0, det.eta_d0 / 2.0 * (xa + xb + cross));
  const double tr = std::max(0.0, det.eta_d1 / 2.0 * (xa + xb - cross));
  const double silent_l = (1.0 - det.pd0) * std::exp(-tl);
  const double silent_r = (1.0 - det.pd1) * std::exp(-tr);
  return {(1.0 - silent_l) * silent_r, silent_l * (1.0 - silent_r)};
}

ClickProbs click_probs(double tau_a, double tau_b, double delta, const LinkModel& link,
                       const DetectorModel& det) {
  return click_probs_received(link.eta_a() * tau_a, link.eta_b() * tau_b, delta, det);
}

double avg_effective_prob(double tau_a, double tau_b, const LinkModel& link, const DetectorModel& det,
                          std::size_t points) {
  const double xa = link.eta_a() * tau_a;
  const double xb = link.eta_b() * tau_b;
  if (xa == 0.0 || xb == 0.0) return click_probs_received(xa, xb, 0.0, det).effective();
  return periodic_mean([&](double d) { return click_probs_received(xa, xb, d, det).effective(); },
                       points);
}

ClickModel::ClickModel(const ScenarioConfig& scenario, std::size_t points)
    : scenario_(scenario), points_(points) {
  for (Intensity a : kIntensities) {
    for (Intensity b : kIntensities) {
      const double q = avg_effective_prob(scenario.alice.intensity(a), scenario.bob.intensity(b),
                                          scenario.link, scenario.detector, points);
      q_[idx(a)][idx(b)] = q;
      const double w = scenario.alice.probability(a) * scenario.bob.probability(b) * q;
      q0_ += w;
      q_kept_ += w * save_probability(a, b, scenario.strategy);
    }
  }
}

ClickModel ClickModel::with_strategy(const StrategyConfig& strategy) const {
  ClickModel out = *this;
  out.scenario_.strategy = strategy;
  out.q_kept_ = 0.0;
  for (Intensity a : kIntensities)
    for (Intensity b : kIntensities)
      out.q_kept_ += scenario_.alice.probability(a) * scenario_.bob.probability(b) * q(a, b) *
                     save_probability(a, b, strategy);
  return out;
}

double ClickModel::received(Intensity a, Intensity b, bool alice) const {
  return alice ? scenario_.link.eta_a() * scenario_.alice.intensity(a)
               : scenario_.link.eta_b() * scenario_.bob.intensity(b);
}

ClickProbs ClickModel::at(Intensity a, Intensity b, double delta) const {
  return click_probs_received(received(a, b, true), received(a, b, false), delta, scenario_.detector);
}

ClickModel build_click_model(const ScenarioConfig& scenario) { return ClickModel(scenario); }

}  // namespace mpqkd
