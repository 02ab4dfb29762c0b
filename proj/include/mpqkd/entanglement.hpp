#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mpqkd {

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr int kMaxPhotonCutoff = 8;

// Two-mode s-photon state 2^{-s/2} Σ_r √C(s,r) e^{irδ} |r⟩|s−r⟩, indexed by r.
CVector omega_state(int s, double delta);

// (|01⟩|0,s⟩ + e^{iδ}|10⟩|s,0⟩)/√2 on ancilla(2⊗2) ⊗ mode1(s+1) ⊗ mode2(s+1).
CVector phi_state(int s, double delta);

// Embeds the r-indexed s-photon vector into mode1(s+1) ⊗ mode2(s+1).
CVector two_mode_embed(const CVector& omega);

CMatrix kron(const CMatrix& a, const CMatrix& b);
CVector kron(const CVector& a, const CVector& b);

// Measurement operators on the 3⊗3 ancilla.
std::vector<CMatrix> mode_pairing_povm();
// Measurement operators on the two-round 3⊗3 ancilla used for basis sifting.
std::vector<CMatrix> basis_sifting_povm();

// |01⟩⟨01| + e^{iδ}|10⟩⟨10| on d⊗d.
CMatrix phase_gate(double delta, int local_dim = 2);

enum class PovmSet { kModePairing, kBasisSifting };

double verify_povm_completeness(PovmSet set);
double verify_povm_orthogonality(PovmSet set);
double min_povm_eigenvalue(PovmSet set);
double verify_phase_gate(double delta);
double verify_single_photon_decomposition(double delta);
double verify_omega_overlap(int s, double delta1, double delta2);

struct CheckResult {
  std::string name;
  double deviation = 0.0;
  double tolerance = 1e-12;
  bool passed() const { return deviation < tolerance; }
};

std::vector<CheckResult> run_algebra_suite(unsigned seed = 7, int random_deltas = 100);

}  // namespace mpqkd
