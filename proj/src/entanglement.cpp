#include "mpqkd/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>

namespace mpqkd {
namespace {

using cd = std::complex<double>;

void check_cutoff(int s) {
  if (s < 0 || s > kMaxPhotonCutoff) throw std::invalid_argument("photon number must lie in [0, 8]");
}

double binom(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

CMatrix ket_bra(int dim, std::initializer_list<int> basis) {
  CMatrix m = CMatrix::Zero(dim, dim);
  for (int b : basis) m(b, b) = 1.0;
  return m;
}

// Index of |x y⟩ in d⊗d.
int pair_index(int x, int y, int d) { return x * d + y; }

template <class D>
double max_abs(const Eigen::MatrixBase<D>& m) {
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

const std::vector<CMatrix>& povm(PovmSet set) {
  static const std::vector<CMatrix> m = mode_pairing_povm();
  static const std::vector<CMatrix> mp = basis_sifting_povm();
  return set == PovmSet::kModePairing ? m : mp;
}

}  // namespace

CVector omega_state(int s, double delta) {
  check_cutoff(s);
  CVector v(s + 1);
  const double norm = std::pow(2.0, -s / 2.0);
  for (int r = 0; r <= s; ++r) v(r) = norm * std::sqrt(binom(s, r)) * std::polar(1.0, r * delta);
  return v;
}

CVector two_mode_embed(const CVector& omega) {
  const int s = static_cast<int>(omega.size()) - 1;
  CVector out = CVector::Zero((s + 1) * (s + 1));
  for (int r = 0; r <= s; ++r) out(pair_index(r, s - r, s + 1)) = omega(r);
  return out;
}

CVector phi_state(int s, double delta) {
  check_cutoff(s);
  const int m = s + 1;
  CVector anc01 = CVector::Zero(4), anc10 = CVector::Zero(4);
  anc01(pair_index(0, 1, 2)) = 1.0;
  anc10(pair_index(1, 0, 2)) = 1.0;
  CVector f0s = CVector::Zero(m * m), fs0 = CVector::Zero(m * m);
  f0s(pair_index(0, s, m)) = 1.0;
  fs0(pair_index(s, 0, m)) = 1.0;
  return (kron(anc01, f0s) + std::polar(1.0, delta) * kron(anc10, fs0)) / std::sqrt(2.0);
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

std::vector<CMatrix> mode_pairing_povm() {
  const CMatrix p01 = ket_bra(3, {0, 1});
  return {kron(p01, p01), ket_bra(9, {pair_index(2, 0, 3), pair_index(0, 2, 3)}),
          ket_bra(9, {pair_index(2, 1, 3), pair_index(1, 2, 3)}), ket_bra(9, {pair_index(2, 2, 3)})};
}

std::vector<CMatrix> basis_sifting_povm() {
  std::vector<CMatrix> m{ket_bra(9, {pair_index(0, 0, 3)}),
                         ket_bra(9, {pair_index(0, 1, 3), pair_index(1, 0, 3)}),
                         ket_bra(9, {pair_index(2, 2, 3)})};
  m.push_back(CMatrix::Identity(9, 9) - m[0] - m[1] - m[2]);
  return m;
}

CMatrix phase_gate(double delta, int d) {
  CMatrix u = CMatrix::Zero(d * d, d * d);
  u(pair_index(0, 1, d), pair_index(0, 1, d)) = 1.0;
  u(pair_index(1, 0, d), pair_index(1, 0, d)) = std::polar(1.0, delta);
  return u;
}

double verify_povm_completeness(PovmSet set) {
  const auto& ms = povm(set);
  CMatrix sum = CMatrix::Zero(ms[0].rows(), ms[0].cols());
  for (const auto& m : ms) sum += m.adjoint() * m;
  return max_abs(sum - CMatrix::Identity(sum.rows(), sum.cols()));
}

double verify_povm_orthogonality(PovmSet set) {
  const auto& ms = povm(set);
  double dev = 0.0;
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = 0; j < ms.size(); ++j)
      if (i != j) dev = std::max(dev, max_abs(ms[i] * ms[j]));
  return dev;
}

double min_povm_eigenvalue(PovmSet set) {
  double lo = INFINITY;
  for (const auto& m : povm(set)) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
    lo = std::min(lo, es.eigenvalues().minCoeff());
  }
  return lo;
}

double verify_phase_gate(double delta) {
  double dev = 0.0;
  for (int d : {2, 3}) {
    const CMatrix proj = ket_bra(d * d, {pair_index(0, 1, d), pair_index(1, 0, d)});
    const CMatrix u = phase_gate(delta, d);
    dev = std::max(dev, max_abs(u.adjoint() * u - proj));
    dev = std::max(dev, max_abs(u * phase_gate(-delta, d) - proj));
  }
  // Acting on the ancilla of φ_{1,δ'} shifts its relative phase by δ.
  const CMatrix u_full = kron(phase_gate(delta, 2), CMatrix::Identity(4, 4));
  for (double base : {0.0, 0.37, 2.0}) dev = std::max(dev, max_abs(u_full * phi_state(1, base) - phi_state(1, base + delta)));
  return dev;
}

double verify_single_photon_decomposition(double delta) {
  const double pi = std::numbers::pi;
  auto w = [](double d) { return two_mode_embed(omega_state(1, d)); };
  const CVector rhs = (kron(w(0.0), w(delta)) + kron(w(pi), w(delta + pi))) / std::sqrt(2.0);
  return max_abs(phi_state(1, delta) - rhs);
}

double verify_omega_overlap(int s, double d1, double d2) {
  const cd overlap = omega_state(s, d1).dot(omega_state(s, d2));  // conjugates the first argument
  const cd expected = std::pow(std::cos((d2 - d1) / 2.0), s) * std::polar(1.0, s * (d2 - d1) / 2.0);
  return std::abs(overlap - expected);
}

std::vector<CheckResult> run_algebra_suite(unsigned seed, int random_deltas) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<double> deltas;
  for (int i = 0; i < random_deltas; ++i) deltas.push_back(angle(gen));

  std::vector<CheckResult> out;
  out.push_back({"povm_completeness_mode_pairing", verify_povm_completeness(PovmSet::kModePairing)});
  out.push_back({"povm_completeness_basis_sifting", verify_povm_completeness(PovmSet::kBasisSifting)});
  out.push_back({"povm_orthogonality_mode_pairing", verify_povm_orthogonality(PovmSet::kModePairing)});
  out.push_back({"povm_orthogonality_basis_sifting", verify_povm_orthogonality(PovmSet::kBasisSifting)});
  out.push_back({"povm_positivity",
                 std::max({0.0, -min_povm_eigenvalue(PovmSet::kModePairing), -min_povm_eigenvalue(PovmSet::kBasisSifting)}),
                 1e-14});

  double gate = std::max({verify_phase_gate(0.0), verify_phase_gate(std::numbers::pi)});
  for (double d : deltas) gate = std::max(gate, verify_phase_gate(d));
  out.push_back({"phase_gate", gate});

  double decomp = 0.0;
  for (double d : deltas) decomp = std::max(decomp, verify_single_photon_decomposition(d));
  out.push_back({"single_photon_decomposition", decomp});

  double norms = 0.0, overlaps = 0.0;
  for (int s = 0; s <= kMaxPhotonCutoff; ++s) {
    for (double d : deltas) {
      norms = std::max(norms, std::abs(omega_state(s, d).norm() - 1.0));
      norms = std::max(norms, std::abs(phi_state(s, d).norm() - 1.0));
    }
  }
  for (int s = 0; s <= 5; ++s)
    for (std::size_t i = 0; i + 1 < deltas.size(); ++i) overlaps = std::max(overlaps, verify_omega_overlap(s, deltas[i], deltas[i + 1]));
  out.push_back({"state_normalization", norms});
  out.push_back({"omega_overlap", overlaps});
  return out;
}

}  // namespace mpqkd
