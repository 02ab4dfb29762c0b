#include "mpqkd/keyrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mpqkd {

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("binary_entropy: argument outside [0,1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double error_correction_leakage(double n_mumu, double m_mumu, double f) {
  if (n_mumu < 0 || m_mumu < 0) throw std::invalid_argument("error_correction_leakage: negative count");
  if (m_mumu > n_mumu) throw std::logic_error("error_correction_leakage: more errors than Z pairs");
  if (n_mumu == 0.0) return 0.0;
  return n_mumu * f * binary_entropy(m_mumu / n_mumu);
}

namespace {

KeyRateResult assemble(const DecoyBounds& b, const PairCountTable& t, double rounds, double f, double overhead,
                       KeyRateMode mode) {
  KeyRateResult r;
  r.mode = mode;
  const double n_mumu = t.n(SumClass::kMu, SumClass::kMu);
  r.E_z = n_mumu > 0 ? std::clamp(t.m_z / n_mumu, 0.0, 0.5) : 0.0;
  r.lambda_ec = error_correction_leakage(n_mumu, t.m_z, f);
  r.n11_z_lower = b.n11_z_lower;
  r.e11_x_upper = b.e11_x_upper;
  auto& d = r.breakdown;
  d.yield_term = b.n11_z_lower * (1.0 - binary_entropy(b.e11_x_upper));
  d.lambda_ec = r.lambda_ec;
  d.unclamped = d.yield_term - d.lambda_ec - overhead;
  r.feasible = b.feasible && d.unclamped > 0.0;
  r.R = r.feasible ? d.unclamped / rounds : 0.0;
  return r;
}

}  // namespace

KeyRateResult finite_key_rate(const DecoyBounds& bounds, const PairCountTable& table, const SecurityEpsilons& eps,
                              double rounds, double f) {
  const double cor = std::log2(2.0 / eps.eps_cor);
  const double est = 2.0 * std::log2(2.0 / (eps.eps_prime * eps.eps_hat));
  const double pa = 2.0 * std::log2(1.0 / (2.0 * eps.eps_pa));
  KeyRateResult r = assemble(bounds, table, rounds, f, cor + est + pa, KeyRateMode::kFinite);
  r.breakdown.correctness = cor;
  r.breakdown.estimation = est;
  r.breakdown.amplification = pa;
  return r;
}

KeyRateResult asymptotic_key_rate(const DecoyBounds& bounds, const PairCountTable& table, double rounds, double f) {
  return assemble(bounds, table, rounds, f, 0.0, KeyRateMode::kAsymptotic);
}

double plob_bound(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::domain_error("plob_bound: eta must lie in [0,1]");
  if (eta == 1.0) return std::numeric_limits<double>::infinity();
  return -std::log1p(-eta) / std::numbers::ln2;
}

}  // namespace mpqkd
