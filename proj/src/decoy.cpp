#include "mpqkd/decoy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace mpqkd {

double poisson_weight(int s, double tau) {
  if (s < 0 || tau < 0) throw std::domain_error("poisson_weight: need s >= 0 and tau >= 0");
  if (tau == 0.0) return s == 0 ? 1.0 : 0.0;
  return std::exp(-tau + s * std::log(tau) - std::lgamma(s + 1.0));
}

PairChoiceProbs pair_choice_probs(const ScenarioConfig& sc) {
  PairChoiceProbs out;
  auto w = [&](Intensity a, Intensity b) {
    return sc.alice.probability(a) * sc.bob.probability(b) * save_probability(a, b, sc.strategy);
  };
  double single = 0.0;
  for (Intensity a : kIntensities)
    for (Intensity b : kIntensities) single += w(a, b);
  out.normalizer = single * single;
  if (out.normalizer <= 0.0) throw ConfigError("strategy", "no intensity combination is ever kept");

  for (std::size_t ca = 0; ca < kSumClasses; ++ca) {
    for (std::size_t cb = 0; cb < kSumClasses; ++cb) {
      double sum = 0.0;
      for (auto [aj, ak] : class_combos(static_cast<SumClass>(ca))) {
        for (auto [bj, bk] : class_combos(static_cast<SumClass>(cb))) {
          const double v = w(aj, bj) * w(ak, bk) / out.normalizer;
          sum += v;
          if (ca == idx(SumClass::kNu) && cb == idx(SumClass::kNu)) {
            const bool same = (aj == Intensity::kVacuum) == (bj == Intensity::kVacuum);
            (same ? out.nunu_same : out.nunu_diff) += v;
          }
        }
      }
      out.by_class[ca][cb] = sum;
    }
  }
  out.x_sifted = out.p(SumClass::k2Nu, SumClass::k2Nu) * 2.0 / static_cast<double>(sc.phase_slices);
  return out;
}

namespace {

// 1 - e^{-y} - y, accurate for small y.
double g_lower(double y) {
  if (y < 0.5) {
    double term = y, sum = 0.0;
    for (int k = 2; k < 40; ++k) {
      term *= -y / k;
      sum += term;
    }
    return sum;
  }
  return -std::expm1(-y) - y;
}

// e^{w} - 1 - w, accurate for small w.
double g_upper(double w) {
  if (w < 0.5) {
    double term = w, sum = 0.0;
    for (int k = 2; k < 40; ++k) {
      term *= w / k;
      sum += term;
    }
    return sum;
  }
  return std::expm1(w) - w;
}

// Root of the decreasing function f on [0, ∞) with f(0) > 0, by bracketing then bisection.
double solve_decreasing(const std::function<double(double)>& f, double& residual) {
  double lo = 0.0, hi = 1.0;
  while (f(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi) || hi > 1e300) throw std::runtime_error("chernoff_bounds: failed to bracket root");
  }
  int it = 0;
  for (; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) {
      lo = hi = mid;
      break;
    }
    (fm > 0.0 ? lo : hi) = mid;
  }
  const double flo = f(lo), fhi = f(hi);
  const double root = std::abs(flo) <= std::abs(fhi) ? lo : hi;
  residual = std::min(std::abs(flo), std::abs(fhi));
  if (it >= 200 && residual > 1e-12) throw std::runtime_error("chernoff_bounds: bisection did not converge");
  return root;
}

}  // namespace

ChernoffResult chernoff_bounds(double n, double eps_l, double eps_u, double zero_upper) {
  if (!(n >= 0.0) || !std::isfinite(n)) throw std::invalid_argument("chernoff_bounds: n must be finite and >= 0");
  if (!(eps_l > 0 && eps_l < 1 && eps_u > 0 && eps_u < 1))
    throw std::invalid_argument("chernoff_bounds: epsilons must lie in (0,1)");
  ChernoffResult r;
  r.n = n;
  r.eps_l = eps_l;
  r.eps_u = eps_u;
  if (n == 0.0) {
    r.upper = std::isnan(zero_upper) ? -std::log(eps_u) : zero_upper;
    return r;
  }
  const double ll = std::log(eps_l), lu = std::log(eps_u);
  // Lower side in y = ln(1+χ_L): n(1 - e^{-y} - y) = ln ε_L.
  const double y = solve_decreasing([&](double v) { return n * g_lower(v) - ll; }, r.residual_l);
  // Upper side in w = -ln(1-χ_U): -n(e^{w} - 1 - w) = ln ε_U.
  const double w = solve_decreasing([&](double v) { return -n * g_upper(v) - lu; }, r.residual_u);
  r.chi_l = std::expm1(y);
  r.chi_u = -std::expm1(-w);
  r.lower = n * std::exp(-y);
  r.upper = n * std::exp(w);
  return r;
}

PairCountTable integerize(const PairCountTable& t) {
  PairCountTable out = t;
  for (auto& row : out.by_class)
    for (double& v : row) v = std::round(v);
  for (double* v : {&out.n_tot, &out.n_nunu_same, &out.n_nunu_diff, &out.n_x, &out.m_x, &out.m_z})
    *v = std::round(*v);
  return out;
}

namespace {

enum class Side { kPlain, kLower, kUpper };

class Estimator {
 public:
  Estimator(const PairCountTable& t, const PairChoiceProbs& p, const ScenarioConfig& sc, bool finite)
      : t_(t), p_(p), sc_(sc), finite_(finite) {}

  DecoyBounds run() const {
    using S = SumClass;
    const auto& A = sc_.alice;
    const auto& B = sc_.bob;
    auto p0 = [](double tau) { return poisson_weight(0, tau); };
    auto p1 = [](double tau) { return poisson_weight(1, tau); };
    const Side up = finite_ ? Side::kUpper : Side::kPlain;
    const Side lo = finite_ ? Side::kLower : Side::kPlain;

    DecoyBounds b;
    b.finite = finite_;

    const double p_mumu = prob(p_.p(S::kMu, S::kMu), "p_[mu,mu]");
    const double p_omu = prob(p_.p(S::kO, S::kMu), "p_[o,mu]");
    const double p_muo = prob(p_.p(S::kMu, S::kO), "p_[mu,o]");
    const double p_oo = prob(p_.p(S::kO, S::kO), "p_[o,o]");
    const double p_nn2 = prob(p_.nunu_diff, "p_[nu,nu]''");
    const double p_onu = prob(p_.p(S::kO, S::kNu), "p_[o,nu]");
    const double p_nuo = prob(p_.p(S::kNu, S::kO), "p_[nu,o]");
    const double p_xx = prob(p_.x_sifted, "p_[2nu,2nu]");
    const double p_o2n = prob(p_.p(S::kO, S::k2Nu), "p_[o,2nu]");
    const double p_2no = prob(p_.p(S::k2Nu, S::kO), "p_[2nu,o]");
    // p_[νν]″ / p_[νν]′, which is p_save for the flexible strategy and 1 for the original one.
    const double ps = p_.nunu_same > 0 ? p_.nunu_diff / p_.nunu_same : 1.0;

    b.n_mu = bound(t_.n(S::kMu, S::kMu), up) / (p0(A.mu) * p0(B.mu) * p_mumu) -
             bound(t_.n(S::kO, S::kMu), lo) / (p0(B.mu) * p_omu) -
             bound(t_.n(S::kMu, S::kO), lo) / (p0(A.mu) * p_muo) + bound(t_.n(S::kO, S::kO), lo) / p_oo;

    b.n_nu = (ps * bound(t_.n_nunu_same, lo) + bound(t_.n_nunu_diff, lo)) / (2.0 * p0(A.nu) * p0(B.nu) * p_nn2) -
             bound(t_.n(S::kO, S::kNu), up) / (p0(B.nu) * p_onu) -
             bound(t_.n(S::kNu, S::kO), up) / (p0(A.nu) * p_nuo) + bound(t_.n(S::kO, S::kO), lo) / p_oo;

    if (A.nu * B.mu <= B.nu * A.mu) {
      b.s_a = 1;
      b.s_b = 2;
    } else {
      b.s_a = 2;
      b.s_b = 1;
    }
    auto ps_a = [&](double tau) { return poisson_weight(b.s_a, tau); };
    auto ps_b = [&](double tau) { return poisson_weight(b.s_b, tau); };

    b.alpha_11 = (p1(A.nu) * p1(B.nu) / (ps_a(A.nu) * ps_b(B.nu) * p1(A.mu) * p1(B.mu)) -
                  1.0 / (ps_a(A.mu) * ps_b(B.mu))) /
                 p_mumu;
    b.n11_z_raw = (p0(A.nu) * p0(B.nu) / (ps_a(A.nu) * ps_b(B.nu)) * b.n_nu -
                   p0(A.mu) * p0(B.mu) / (ps_a(A.mu) * ps_b(B.mu)) * b.n_mu) /
                  b.alpha_11;
    b.n11_z_lower = std::max(0.0, b.n11_z_raw);

    const double a2 = 2.0 * A.nu, b2 = 2.0 * B.nu;
    b.m_2nu = t_.m_x / (p0(a2) * p0(b2) * p_xx) - bound(t_.n(S::kO, S::k2Nu), lo) / (2.0 * p0(b2) * p_o2n) -
              bound(t_.n(S::k2Nu, S::kO), lo) / (2.0 * p0(a2) * p_2no) +
              bound(t_.n(S::kO, S::kO), up) / (2.0 * p_oo);
    b.m11_2nu_upper = std::max(0.0, p0(a2) * p0(b2) * p_xx * b.m_2nu);
    b.n11_2nu_lower = p1(a2) * p1(b2) * p_xx / (p1(A.mu) * p1(B.mu) * p_mumu) * b.n11_z_lower;

    if (b.n11_2nu_lower > 0.0) {
      b.e11_x_raw = b.m11_2nu_upper / b.n11_2nu_lower;
      b.e11_x_upper = std::clamp(b.e11_x_raw, 0.0, 0.5);
      b.feasible = true;
    } else {
      b.e11_x_raw = 0.5;
      b.e11_x_upper = 0.5;
      b.feasible = false;
    }
    return b;
  }

 private:
  double bound(double n, Side side) const {
    if (side == Side::kPlain) return n;
    const ChernoffResult c = chernoff_bounds(n, sc_.eps.eps_pe, sc_.eps.eps_pe);
    return side == Side::kLower ? c.lower : c.upper;
  }

  static double prob(double p, const char* name) {
    if (!(p > 0.0)) {
      std::ostringstream msg;
      msg << "pair-choice probability " << name << " is " << p << "; the estimator needs this class";
      throw ConfigError(std::string("estimator.") + name, msg.str());
    }
    return p;
  }

  const PairCountTable& t_;
  const PairChoiceProbs& p_;
  const ScenarioConfig& sc_;
  bool finite_;
};

}  // namespace

DecoyBounds estimate_asymptotic(const PairCountTable& table, const PairChoiceProbs& probs,
                                const ScenarioConfig& scenario) {
  return Estimator(table, probs, scenario, false).run();
}

DecoyBounds estimate_finite(const PairCountTable& table, const PairChoiceProbs& probs,
                            const ScenarioConfig& scenario) {
  return Estimator(table, probs, scenario, true).run();
}

}  // namespace mpqkd
