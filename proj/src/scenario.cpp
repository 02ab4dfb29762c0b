#include "mpqkd/scenario.hpp"

#include <cmath>

namespace mpqkd {
namespace {

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

std::string_view to_string(Intensity i) {
  switch (i) {
    case Intensity::kVacuum: return "o";
    case Intensity::kDecoy: return "nu";
    case Intensity::kSignal: return "mu";
  }
  return "?";
}

void DetectorModel::validate() const {
  require(finite(eta_d0) && eta_d0 >= 0 && eta_d0 <= 1, "detector.eta_d0", "must lie in [0,1]");
  require(finite(eta_d1) && eta_d1 >= 0 && eta_d1 <= 1, "detector.eta_d1", "must lie in [0,1]");
  require(finite(pd0) && pd0 >= 0 && pd0 < 1, "detector.pd0", "must lie in [0,1)");
  require(finite(pd1) && pd1 >= 0 && pd1 < 1, "detector.pd1", "must lie in [0,1)");
}

double SourceModel::intensity(Intensity i) const {
  switch (i) {
    case Intensity::kVacuum: return 0.0;
    case Intensity::kDecoy: return nu;
    case Intensity::kSignal: return mu;
  }
  return 0.0;
}

double SourceModel::probability(Intensity i) const {
  switch (i) {
    case Intensity::kVacuum: return p_o;
    case Intensity::kDecoy: return p_nu;
    case Intensity::kSignal: return p_mu;
  }
  return 0.0;
}

void SourceModel::validate(const std::string& party) const {
  require(finite(mu) && mu > 0, party + ".mu", "must be > 0");
  require(finite(nu) && nu >= 0, party + ".nu", "must be >= 0");
  require(nu < mu, party + ".nu", "must be smaller than mu");
  for (auto [name, p] : {std::pair{"p_mu", p_mu}, {"p_nu", p_nu}, {"p_o", p_o}}) {
    require(finite(p) && p >= 0 && p <= 1, party + "." + name, "must lie in [0,1]");
  }
  require(std::abs(p_mu + p_nu + p_o - 1.0) <= 1e-12, party + ".p_o",
          "p_mu + p_nu + p_o must equal 1");
}

double LinkModel::eta_a() const {
  return std::pow(10.0, -loss_db_per_km * total_distance_km * alice_fraction / 10.0);
}

double LinkModel::eta_b() const {
  return std::pow(10.0, -loss_db_per_km * total_distance_km * (1.0 - alice_fraction) / 10.0);
}

double LinkModel::eta_total() const {
  return std::pow(10.0, -loss_db_per_km * total_distance_km / 10.0);
}

void LinkModel::validate() const {
  require(finite(total_distance_km) && total_distance_km >= 0, "link.distance_km", "must be >= 0");
  require(finite(loss_db_per_km) && loss_db_per_km >= 0, "link.loss_db_per_km", "must be >= 0");
  require(finite(alice_fraction) && alice_fraction >= 0 && alice_fraction <= 1,
          "link.alice_fraction", "must lie in [0,1]");
  require(eta_a() > 0 && eta_b() > 0, "link.distance_km", "transmittance underflows to 0");
}

void MisalignmentModel::validate() const {
  require(finite(e_hom) && e_hom >= 0 && e_hom <= 0.5, "misalignment.e_hom", "must lie in [0,0.5]");
  require(finite(delta_f_hz), "misalignment.delta_f_hz", "must be finite");
  require(finite(omega_fiber), "misalignment.omega_fiber", "must be finite");
  require(finite(clock_hz) && clock_hz > 0, "misalignment.clock_hz", "must be > 0");
}

void StrategyConfig::validate() const {
  require(finite(p_save) && p_save > 0 && p_save <= 1, "strategy.p_save", "must lie in (0,1]");
  require(interval >= 1, "strategy.interval", "must be >= 1");
}

void SecurityEpsilons::validate() const {
  for (auto [name, e] : {std::pair{"security.eps_cor", eps_cor},
                         {"security.eps_prime", eps_prime},
                         {"security.eps_hat", eps_hat},
                         {"security.eps_pa", eps_pa},
                         {"security.eps_pe", eps_pe}}) {
    require(finite(e) && e > 0 && e < 1, name, "must lie in (0,1)");
  }
}

void ScenarioConfig::validate() const {
  detector.validate();
  alice.validate("alice");
  bob.validate("bob");
  link.validate();
  misalignment.validate();
  strategy.validate();
  eps.validate();
  require(finite(rounds) && rounds >= 1, "protocol.rounds", "must be >= 1");
  require(phase_slices >= 2, "protocol.phase_slices", "must be >= 2");
  require(finite(ec_efficiency) && ec_efficiency >= 1, "protocol.ec_efficiency", "must be >= 1");
}

std::string_view to_string(StrategyKind k) {
  return k == StrategyKind::kOriginal ? "original" : "flexible";
}

std::string_view to_string(KeyRateMode m) {
  return m == KeyRateMode::kAsymptotic ? "asymptotic" : "finite";
}

std::string_view to_string(PhaseSift s) { return s == PhaseSift::kMatched ? "matched" : "wide"; }

StrategyKind parse_strategy(std::string_view s) {
  if (s == "original") return StrategyKind::kOriginal;
  if (s == "flexible") return StrategyKind::kFlexible;
  throw ConfigError("strategy.kind", "expected 'original' or 'flexible', got '" + std::string(s) + "'");
}

KeyRateMode parse_mode(std::string_view s) {
  if (s == "asymptotic") return KeyRateMode::kAsymptotic;
  if (s == "finite") return KeyRateMode::kFinite;
  throw ConfigError("protocol.mode", "expected 'asymptotic' or 'finite', got '" + std::string(s) + "'");
}

PhaseSift parse_sift(std::string_view s) {
  if (s == "matched") return PhaseSift::kMatched;
  if (s == "wide") return PhaseSift::kWide;
  throw ConfigError("protocol.x_sift", "expected 'matched' or 'wide', got '" + std::string(s) + "'");
}

}  // namespace mpqkd
