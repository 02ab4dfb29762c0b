#include "mpqkd/pairing.hpp"

#include <cmath>
#include <numbers>

namespace mpqkd {

std::string_view to_string(SumClass c) {
  switch (c) {
    case SumClass::kO: return "o";
    case SumClass::kNu: return "nu";
    case SumClass::kMu: return "mu";
    case SumClass::k2Nu: return "2nu";
    case SumClass::kMuNu: return "mu+nu";
    case SumClass::k2Mu: return "2mu";
  }
  return "?";
}

std::vector<std::pair<Intensity, Intensity>> class_combos(SumClass c) {
  std::vector<std::pair<Intensity, Intensity>> out;
  for (Intensity j : kIntensities)
    for (Intensity k : kIntensities)
      if (sum_class(j, k) == c) out.emplace_back(j, k);
  return out;
}

std::vector<std::pair<std::string, double>> PairCountTable::named() const {
  using S = SumClass;
  return {{"n_tot", n_tot},
          {"n_mu_mu", n(S::kMu, S::kMu)},
          {"n_o_mu", n(S::kO, S::kMu)},
          {"n_mu_o", n(S::kMu, S::kO)},
          {"n_o_o", n(S::kO, S::kO)},
          {"n_nu_nu", n(S::kNu, S::kNu)},
          {"n_nu_nu_same", n_nunu_same},
          {"n_nu_nu_diff", n_nunu_diff},
          {"n_o_nu", n(S::kO, S::kNu)},
          {"n_nu_o", n(S::kNu, S::kO)},
          {"n_2nu_2nu", n_x},
          {"n_o_2nu", n(S::kO, S::k2Nu)},
          {"n_2nu_o", n(S::k2Nu, S::kO)},
          {"m_z", m_z},
          {"m_x", m_x}};
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> pair_rounds(std::span<const std::uint8_t> kept,
                                                                 std::uint64_t interval) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  GreedyPairer pairer(interval);
  for (std::uint64_t i = 0; i < kept.size(); ++i) {
    if (!kept[i]) continue;
    if (auto p = pairer.push(i)) pairs.push_back(*p);
  }
  return pairs;
}

namespace {

// 1 - (1-q)^l without cancellation for small q.
double pair_within_interval(double q, std::uint64_t l) {
  if (q >= 1.0) return 1.0;
  return -std::expm1(static_cast<double>(l) * std::log1p(-q));
}

}  // namespace

double analytic_pairing_efficiency(double q, std::uint64_t interval) {
  if (q <= 0.0) return 0.0;
  const double p = pair_within_interval(q, interval);
  return 1.0 / (1.0 / q + 1.0 / (q * p));
}

double mean_pairing_interval(double q, std::uint64_t interval, double clock_hz) {
  if (q <= 0.0) return 0.0;
  const double p = pair_within_interval(q, interval);
  const double l = static_cast<double>(interval);
  return (1.0 - l * q * (1.0 / p - 1.0)) / (q * clock_hz);
}

PairCountTable analytic_pair_counts(const ScenarioConfig& sc, const ClickModel& clicks) {
  PairCountTable t;
  t.mode = CountMode::kAnalytic;
  const double q = clicks.q_kept();
  if (q <= 0.0) return t;

  const double r = analytic_pairing_efficiency(q, sc.strategy.interval);
  t.n_tot = sc.rounds * r;
  const double k = t.n_tot / (q * q);

  auto pa = [&](Intensity i) { return sc.alice.probability(i); };
  auto pb = [&](Intensity i) { return sc.bob.probability(i); };
  auto save = [&](Intensity a, Intensity b) { return save_probability(a, b, sc.strategy); };
  // Probability weight that a round has choices (a, b), is effective and is kept.
  auto w = [&](Intensity a, Intensity b) { return pa(a) * pb(b) * clicks.q(a, b) * save(a, b); };

  for (std::size_t ca = 0; ca < kSumClasses; ++ca) {
    const auto alice = class_combos(static_cast<SumClass>(ca));
    for (std::size_t cb = 0; cb < kSumClasses; ++cb) {
      const auto bob = class_combos(static_cast<SumClass>(cb));
      double sum = 0.0;
      for (auto [aj, ak] : alice) {
        for (auto [bj, bk] : bob) {
          const double v = w(aj, bj) * w(ak, bk);
          sum += v;
          if (ca == idx(SumClass::kNu) && cb == idx(SumClass::kNu)) {
            const bool same = (aj == Intensity::kVacuum) == (bj == Intensity::kVacuum);
            (same ? t.n_nunu_same : t.n_nunu_diff) += k * v;
          }
        }
      }
      t.by_class[ca][cb] = k * sum;
    }
  }

  using I = Intensity;
  t.m_z = 2.0 * k * w(I::kSignal, I::kSignal) * w(I::kVacuum, I::kVacuum);

  const double sift = 2.0 / static_cast<double>(sc.phase_slices);
  const double x_pref = k * sift * std::pow(pa(I::kDecoy) * pb(I::kDecoy) * save(I::kDecoy, I::kDecoy), 2);
  const std::size_t pts = clicks.quadrature_points();
  auto c = [&](double d) { return clicks.at(I::kDecoy, I::kDecoy, d); };

  t.n_x = x_pref * periodic_mean([&](double d) { return std::pow(c(d).effective(), 2); }, pts);

  const auto& mis = sc.misalignment;
  if (!mis.enabled) {
    t.m_x = 2.0 * x_pref * periodic_mean([&](double d) { return c(d).left * c(d).right; }, pts);
  } else {
    const double t_mean = mean_pairing_interval(q, sc.strategy.interval, mis.clock_hz);
    const double theta = t_mean * (2.0 * std::numbers::pi * mis.delta_f_hz + mis.omega_fiber);
    const double e = mis.e_hom;
    t.m_x = x_pref * periodic_mean(
                         [&](double d) {
                           const ClickProbs a = c(d);
                           const ClickProbs b = c(d + theta);
                           return (1.0 - e) * (a.left * b.right + a.right * b.left) +
                                  e * (a.left * b.left + a.right * b.right);
                         },
                         pts);
  }
  return t;
}

}  // namespace mpqkd
