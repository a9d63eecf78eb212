// Exact dynamics inside one momentum quartet.
//
// The quartet Fock space has 16 states indexed by
//   b = 8 n_{q-pi} + 4 n_{-q} + 2 n_q + n_{pi-q},
// with Jordan-Wigner signs taken in the slot order (q-pi, -q, q, pi-q). The full chain
// Hamiltonian is H = 2 sum_q H_q (plus a constant), so a quartet evolves with
// exp(-2 i H_q t).
#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

#include "kitaev/model.hpp"

namespace kitaev {

using Complex = std::complex<double>;
using Vec16 = Eigen::Matrix<Complex, 16, 1>;
using Mat16 = Eigen::Matrix<Complex, 16, 16>;
using Real16 = Eigen::Matrix<double, 16, 1>;
using Mat4 = Eigen::Matrix<Complex, 4, 4>;

inline constexpr int kQuartetDim = 16;

/// Basis bit carried by a slot: q-pi -> 8, -q -> 4, q -> 2, pi-q -> 1.
constexpr int slot_bit(Slot s) { return 8 >> slot_index(s); }

struct ModeState {
  Vec16 amplitudes = Vec16::Zero();

  static ModeState vacuum() { return basis(0); }
  static ModeState basis(int b);

  double norm() const { return amplitudes.norm(); }
  /// +1 for even fermion number, -1 for odd, 0 when both sectors carry weight above tol.
  int parity(double tol = 1e-12) const;
};

/// Creation and annihilation operators of the four quartet modes.
class FermionOps {
 public:
  static const FermionOps& get();

  const Mat16& annihilate(Slot s) const { return c_[slot_index(s)]; }
  const Mat16& create(Slot s) const { return cdag_[slot_index(s)]; }

 private:
  FermionOps();
  std::array<Mat16, 4> c_;
  std::array<Mat16, 4> cdag_;
};

/// Quartet block of the chain's fermion Hamiltonian,
///   H_block = sum_ab hopping(a,b) c_a^+ c_b + sum_ab [pairing(a,b) c_a^+ c_b^+ + h.c.],
/// obtained by Fourier-restricting the real-space Jordan-Wigner bonds (antiperiodic
/// boundary) onto the quartet momenta. H_block = 2 H_q.
struct QuartetQuadraticForm {
  Mat4 hopping = Mat4::Zero();
  Mat4 pairing = Mat4::Zero();
};

QuartetQuadraticForm quartet_quadratic_form(const ChainSpec& spec, const ModeQuartet& quartet);

/// Coefficient of c_a^+ c_b (hopping) and c_a^+ c_b^+ (pairing) between two arbitrary
/// momenta. Nonzero only for momenta in the same quartet.
Complex fourier_hopping(const ChainSpec& spec, double k_a, double k_b);
Complex fourier_pairing(const ChainSpec& spec, double k_a, double k_b);

/// Lifts a quadratic form onto the 16-dim Fock space.
Mat16 fock_matrix(const QuartetQuadraticForm& form);

/// Hermitian 16x16 mode Hamiltonian H_q with a cached eigendecomposition.
class ModeHamiltonian {
 public:
  explicit ModeHamiltonian(const Mat16& matrix);

  const Mat16& matrix() const { return matrix_; }
  const Real16& eigenvalues() const { return eigenvalues_; }
  const Mat16& eigenvectors() const { return eigenvectors_; }

  /// exp(-2 i H_q t)
  Mat16 propagator(double t) const;
  ModeState evolve(const ModeState& state, double t) const;

 private:
  Mat16 matrix_;
  Real16 eigenvalues_;
  Mat16 eigenvectors_;
};

ModeHamiltonian build_mode_hamiltonian(const ChainSpec& spec, const ModeQuartet& quartet);

/// exp(-2 i H_q t) |0000>
ModeState evolve_vacuum(const ModeHamiltonian& h_q, double t);

/// A_q = <phi'_q(t)|phi_q(t)>, forward under spec_f, backward under spec_b.
Complex overlap_amplitude(const ChainSpec& spec_f, const ChainSpec& spec_b,
                          const ModeQuartet& quartet, double t);

/// Matrix M with H_q = sum_ab D_a^+ M_ab D_b + const in the basis
/// D = (c_{q-pi}, c_{-q}^+, c_q, c_{pi-q}^+). Its eigenvalues are the lambda_i.
Mat4 quasiparticle_matrix(const ModeHamiltonian& h_q);

/// Eigenoperator coefficients xi_i^+ = sum_j Gamma_ij d_j with
/// d = (c_{q-pi}^+, c_{-q}, c_q^+, c_{pi-q}). Rows are built in closed form from
/// C = cos(theta_q/2), S = sin(theta_q/2) and h_i = h/lambda_i and normalised by
/// 1/sqrt(2 (1 + h_i^2)), which makes Gamma unitary.
class GammaMatrix {
 public:
  /// Throws std::domain_error for a degenerate spectrum (some lambda_i = 0) or when
  /// j_x (1 + r) <= 0, where the closed form does not apply.
  static GammaMatrix build(const ChainSpec& spec, const ModeQuartet& quartet);

  const Mat4& entries() const { return entries_; }
  const std::array<double, 4>& lambdas() const { return lambdas_; }

 private:
  Mat4 entries_ = Mat4::Zero();
  std::array<double, 4> lambdas_{};
};

/// Coefficients of c_q^+(t) = e^{-2iH_q t} c_q^+ e^{2iH_q t}
///   = beta_1 c_{q-pi}^+ + beta_2 c_{-q} + beta_3 c_q^+ + beta_4 c_{pi-q},
/// beta_j = sum_i exp(-2 i lambda_i t) conj(Gamma_i3) Gamma_ij.
/// Same errors as GammaMatrix::build.
std::array<Complex, 4> heisenberg_beta(const ChainSpec& spec, const ModeQuartet& quartet,
                                       double t);

/// O(t) |state> with O(t) = e^{-2iH_q t} O e^{2iH_q t}, where O is c_slot^+ (dagger) or
/// c_slot. O(t) maps the evolved vacuum onto the evolved excitation:
/// O(t) e^{-2iH_q t}|0> = e^{-2iH_q t} O |0>. The result is not normalised.
ModeState apply_evolved_operator(const ModeState& state, const ModeHamiltonian& h_q, Slot slot,
                                 double t, bool dagger);

/// C(k,q) = <phi'_q(t)| c'_k(t) c_q^+(t) |phi_q(t)>, with c'_k evolved under spec_b and
/// c_q^+ under spec_f. Equals <0|c_k e^{2iH'_q t} e^{-2iH_q t} c_q^+|0>.
Complex correlator_C(const ChainSpec& spec_f, const ChainSpec& spec_b, const ModeQuartet& quartet,
                     Slot k, Slot q, double t);

}  // namespace kitaev
