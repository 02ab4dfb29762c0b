#pragma once

#include <array>
#include <limits>

#include "mpqkd/pairing.hpp"

namespace mpqkd {

double poisson_weight(int s, double tau);

// Probability that a kept pair falls in each (Alice class, Bob class), normalized
// by p_s = (Σ p_a p_b save(a,b))².
struct PairChoiceProbs {
  std::array<std::array<double, kSumClasses>, kSumClasses> by_class{};
  double nunu_same = 0.0;
  double nunu_diff = 0.0;
  // [2ν,2ν] class probability times the phase-sift acceptance 2/M.
  double x_sifted = 0.0;
  double normalizer = 0.0;

  double p(SumClass a, SumClass b) const { return by_class[idx(a)][idx(b)]; }
};

PairChoiceProbs pair_choice_probs(const ScenarioConfig& scenario);

struct ChernoffResult {
  double n = 0.0;
  double eps_l = 0.0;
  double eps_u = 0.0;
  double chi_l = 0.0;
  double chi_u = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double residual_l = 0.0;
  double residual_u = 0.0;
};

// Bounds on the expectation of an observed count. For n = 0 the lower bound is 0 and
// the upper bound is `zero_upper` (default −ln ε_U).
ChernoffResult chernoff_bounds(double n, double eps_l, double eps_u,
                               double zero_upper = std::numeric_limits<double>::quiet_NaN());

struct DecoyBounds {
  bool finite = false;
  double n_mu = 0.0;
  double n_nu = 0.0;
  double m_2nu = 0.0;
  double alpha_11 = 0.0;
  int s_a = 1;
  int s_b = 2;
  double n11_z_raw = 0.0;
  double n11_z_lower = 0.0;
  double n11_2nu_lower = 0.0;
  double m11_2nu_upper = 0.0;
  double e11_x_raw = 0.0;
  double e11_x_upper = 0.5;
  bool feasible = false;
};

DecoyBounds estimate_asymptotic(const PairCountTable& table, const PairChoiceProbs& probs,
                                const ScenarioConfig& scenario);

DecoyBounds estimate_finite(const PairCountTable& table, const PairChoiceProbs& probs,
                            const ScenarioConfig& scenario);

// Rounds every count to the nearest integer (for feeding MC tables to the estimator).
PairCountTable integerize(const PairCountTable& table);

}  // namespace mpqkd
