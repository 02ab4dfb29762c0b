#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mpqkd {

// Raised for invalid or unusable configurations. The message starts with the
// offending field path, e.g. "alice.p_mu: ...".
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class Intensity : std::uint8_t { kVacuum = 0, kDecoy = 1, kSignal = 2 };

inline constexpr std::array<Intensity, 3> kIntensities{Intensity::kVacuum, Intensity::kDecoy,
                                                       Intensity::kSignal};

constexpr std::size_t idx(Intensity i) { return static_cast<std::size_t>(i); }
std::string_view to_string(Intensity i);

struct DetectorModel {
  double eta_d0 = 0.78;
  double eta_d1 = 0.78;
  double pd0 = 1e-8;
  double pd1 = 1e-8;

  void validate() const;
  bool operator==(const DetectorModel&) const = default;
};

struct SourceModel {
  double mu = 0.542;
  double nu = 0.035;
  double p_mu = 0.261;
  double p_nu = 0.344;
  double p_o = 0.395;

  double intensity(Intensity i) const;
  double probability(Intensity i) const;
  void validate(const std::string& party) const;
  bool operator==(const SourceModel&) const = default;
};

struct LinkModel {
  double total_distance_km = 0.0;
  double loss_db_per_km = 0.2;
  // Share of the fiber on Alice's side; 0.5 is the symmetric split.
  double alice_fraction = 0.5;

  double eta_a() const;
  double eta_b() const;
  // Transmittance of the whole Alice-Bob fiber (used for the PLOB reference).
  double eta_total() const;
  void validate() const;
  bool operator==(const LinkModel&) const = default;
};

struct MisalignmentModel {
  bool enabled = false;
  double e_hom = 0.04;
  double delta_f_hz = 10.0;
  double omega_fiber = 5.9e3;
  double clock_hz = 1e9;

  void validate() const;
  bool operator==(const MisalignmentModel&) const = default;
};

enum class StrategyKind { kOriginal, kFlexible };

struct StrategyConfig {
  StrategyKind kind = StrategyKind::kFlexible;
  double p_save = 0.5;
  std::uint64_t interval = 200000;

  void validate() const;
  bool operator==(const StrategyConfig&) const = default;
};

struct SecurityEpsilons {
  double eps_cor = 1e-10;
  double eps_prime = 1e-10;
  double eps_hat = 1e-10;
  double eps_pa = 1e-10;
  double eps_pe = 1e-10;

  void validate() const;
  bool operator==(const SecurityEpsilons&) const = default;
};

enum class KeyRateMode { kAsymptotic, kFinite };

// X-basis phase sifting rule used by the Monte Carlo.
//  kMatched: accept when δa−δb lies within π/M of 0 or of π (circular distance),
//            acceptance probability exactly 2/M.
//  kWide: accept when |δa−δb| < 2π/M or ||δa−δb|−π| < 2π/M with δ in [0, 2π).
enum class PhaseSift { kMatched, kWide };

struct ScenarioConfig {
  DetectorModel detector;
  SourceModel alice;
  SourceModel bob;
  LinkModel link;
  MisalignmentModel misalignment;
  StrategyConfig strategy;
  SecurityEpsilons eps;
  double rounds = 7.24e13;
  int phase_slices = 16;
  double ec_efficiency = 1.1;
  KeyRateMode mode = KeyRateMode::kFinite;
  PhaseSift sift = PhaseSift::kMatched;

  void validate() const;
  bool operator==(const ScenarioConfig&) const = default;
};

std::string_view to_string(StrategyKind k);
std::string_view to_string(KeyRateMode m);
std::string_view to_string(PhaseSift s);
StrategyKind parse_strategy(std::string_view s);
KeyRateMode parse_mode(std::string_view s);
PhaseSift parse_sift(std::string_view s);

}  // namespace mpqkd
