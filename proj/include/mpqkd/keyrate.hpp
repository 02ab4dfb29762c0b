#pragma once

#include "mpqkd/decoy.hpp"

namespace mpqkd {

double binary_entropy(double x);

double error_correction_leakage(double n_mumu, double m_mumu, double f);

struct KeyRateBreakdown {
  double yield_term = 0.0;  // n̲₁₁ᶻ[1 − H₂(e̅₁₁ˣ)]
  double lambda_ec = 0.0;
  double correctness = 0.0;  // log₂(2/ε_cor)
  double estimation = 0.0;   // 2 log₂(2/(ε′ε̂))
  double amplification = 0.0;  // 2 log₂(1/(2ε_PA))
  double unclamped = 0.0;      // the bracket before dividing by N and clamping
};

struct KeyRateResult {
  KeyRateMode mode = KeyRateMode::kAsymptotic;
  double R = 0.0;
  double E_z = 0.0;
  double lambda_ec = 0.0;
  double n11_z_lower = 0.0;
  double e11_x_upper = 0.5;
  bool feasible = false;
  KeyRateBreakdown breakdown;
};

KeyRateResult finite_key_rate(const DecoyBounds& bounds, const PairCountTable& table, const SecurityEpsilons& eps,
                              double rounds, double f);

KeyRateResult asymptotic_key_rate(const DecoyBounds& bounds, const PairCountTable& table, double rounds, double f);

// Repeaterless bound −log₂(1−η).
double plob_bound(double eta);

}  // namespace mpqkd
