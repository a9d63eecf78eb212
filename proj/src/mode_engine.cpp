#include "kitaev/mode_engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace kitaev {

namespace {

constexpr Complex kI{0.0, 1.0};

// Real-space bond couplings. Bond j joins sites j and j+1 (1-based); odd bonds carry
// x-x, even bonds y-y. Under Jordan-Wigner
//   sx_j sx_{j+1} = c_j^+ c_{j+1} + h.c. + (c_j^+ c_{j+1}^+ + h.c.)
//   sy_j sy_{j+1} = c_j^+ c_{j+1} + h.c. - (c_j^+ c_{j+1}^+ + h.c.)
// A coupling odd_value on odd bonds and even_value on even bonds has the lattice sum
//   (1/N) sum_j c_j e^{i d j} = avg [d = 0] - half_diff [d = pi]   (mod 2 pi),
// exact on the allowed grid and used as the definition for any other momenta.
Complex bond_sum(double odd_value, double even_value, double d) {
  const double r = reduce_momentum(d);
  if (std::abs(r) < 1e-12) return 0.5 * (odd_value + even_value);
  if (std::abs(std::abs(r) - kPi) < 1e-12) return -0.5 * (odd_value - even_value);
  return 0.0;
}

}  // namespace

ModeState ModeState::basis(int b) {
  if (b < 0 || b >= kQuartetDim) throw std::out_of_range("quartet basis index out of range");
  ModeState s;
  s.amplitudes(b) = 1.0;
  return s;
}

int ModeState::parity(double tol) const {
  double even = 0.0;
  double odd = 0.0;
  for (int b = 0; b < kQuartetDim; ++b) {
    const double w = std::norm(amplitudes(b));
    (std::popcount(static_cast<unsigned>(b)) % 2 == 0 ? even : odd) += w;
  }
  if (odd <= tol) return 1;
  if (even <= tol) return -1;
  return 0;
}

FermionOps::FermionOps() {
  for (Slot s : kAllSlots) {
    Mat16 c = Mat16::Zero();
    const int bit = slot_bit(s);
    for (int b = 0; b < kQuartetDim; ++b) {
      if ((b & bit) == 0) continue;
      // slots before s own the higher bits
      const int before = std::popcount(static_cast<unsigned>(b & ~(2 * bit - 1)));
      c(b ^ bit, b) = (before % 2 == 0) ? 1.0 : -1.0;
    }
    c_[slot_index(s)] = c;
    cdag_[slot_index(s)] = c.adjoint();
  }
}

const FermionOps& FermionOps::get() {
  static const FermionOps ops;
  return ops;
}

Complex fourier_hopping(const ChainSpec& spec, double k_a, double k_b) {
  Complex sum = (std::exp(kI * k_b) + std::exp(-kI * k_a)) * bond_sum(spec.j_x, spec.j_y(), k_b - k_a);
  if (std::abs(reduce_momentum(k_a - k_b)) < 1e-12) sum += 2.0 * spec.h;
  return sum;
}

Complex fourier_pairing(const ChainSpec& spec, double k_a, double k_b) {
  return std::exp(-kI * k_b) * bond_sum(spec.j_x, -spec.j_y(), -(k_a + k_b));
}

QuartetQuadraticForm quartet_quadratic_form(const ChainSpec& spec, const ModeQuartet& quartet) {
  spec.validate();
  QuartetQuadraticForm form;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      form.hopping(a, b) = fourier_hopping(spec, quartet.partners[a], quartet.partners[b]);
      form.pairing(a, b) = fourier_pairing(spec, quartet.partners[a], quartet.partners[b]);
    }
  }
  return form;
}

Mat16 fock_matrix(const QuartetQuadraticForm& form) {
  const auto& ops = FermionOps::get();
  Mat16 h = Mat16::Zero();
  for (Slot a : kAllSlots) {
    for (Slot b : kAllSlots) {
      const int ia = slot_index(a);
      const int ib = slot_index(b);
      h += form.hopping(ia, ib) * ops.create(a) * ops.annihilate(b);
      const Mat16 pair = form.pairing(ia, ib) * ops.create(a) * ops.create(b);
      h += pair + pair.adjoint();
    }
  }
  return h;
}

ModeHamiltonian::ModeHamiltonian(const Mat16& matrix) : matrix_(0.5 * (matrix + matrix.adjoint())) {
  using Mat8 = Eigen::Matrix<Complex, 8, 8>;
  // Diagonalised per fermion-parity sector; eigenvectors vanish outside their sector.
  std::array<std::array<int, 8>, 2> sector{};
  std::array<int, 2> fill{0, 0};
  for (int b = 0; b < kQuartetDim; ++b) {
    const int p = std::popcount(static_cast<unsigned>(b)) % 2;
    sector[p][fill[p]++] = b;
  }
  std::array<std::pair<double, Vec16>, kQuartetDim> pairs;
  int out = 0;
  for (const auto& states : sector) {
    Mat8 block;
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) block(i, j) = matrix_(states[i], states[j]);
    }
    Eigen::SelfAdjointEigenSolver<Mat8> solver(block);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("mode Hamiltonian diagonalisation failed");
    }
    for (int k = 0; k < 8; ++k) {
      Vec16 v = Vec16::Zero();
      for (int i = 0; i < 8; ++i) v(states[i]) = solver.eigenvectors()(i, k);
      pairs[out++] = {solver.eigenvalues()(k), v};
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (int k = 0; k < kQuartetDim; ++k) {
    eigenvalues_(k) = pairs[k].first;
    eigenvectors_.col(k) = pairs[k].second;
  }
}

Mat16 ModeHamiltonian::propagator(double t) const {
  Vec16 phases;
  for (int i = 0; i < kQuartetDim; ++i) phases(i) = std::exp(-2.0 * kI * eigenvalues_(i) * t);
  return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

ModeState ModeHamiltonian::evolve(const ModeState& state, double t) const {
  Vec16 coeffs = eigenvectors_.adjoint() * state.amplitudes;
  for (int i = 0; i < kQuartetDim; ++i) coeffs(i) *= std::exp(-2.0 * kI * eigenvalues_(i) * t);
  return ModeState{eigenvectors_ * coeffs};
}

ModeHamiltonian build_mode_hamiltonian(const ChainSpec& spec, const ModeQuartet& quartet) {
  return ModeHamiltonian(0.5 * fock_matrix(quartet_quadratic_form(spec, quartet)));
}

ModeState evolve_vacuum(const ModeHamiltonian& h_q, double t) {
  return h_q.evolve(ModeState::vacuum(), t);
}

Complex overlap_amplitude(const ChainSpec& spec_f, const ChainSpec& spec_b,
                          const ModeQuartet& quartet, double t) {
  const ModeState fwd = evolve_vacuum(build_mode_hamiltonian(spec_f, quartet), t);
  const ModeState bwd = evolve_vacuum(build_mode_hamiltonian(spec_b, quartet), t);
  return bwd.amplitudes.dot(fwd.amplitudes);
}

Mat4 quasiparticle_matrix(const ModeHamiltonian& h_q) {
  const auto& ops = FermionOps::get();
  const std::array<Mat16, 4> d_ann{ops.annihilate(Slot::q_minus_pi), ops.create(Slot::minus_q),
                                   ops.annihilate(Slot::q), ops.create(Slot::pi_minus_q)};
  // [H, D_b^+] = sum_a D_a^+ M_ab and tr(D_a D_c^+) = 8 delta_ac
  Mat4 m;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const Mat16 dbd = d_ann[b].adjoint();
      const Mat16 comm = h_q.matrix() * dbd - dbd * h_q.matrix();
      m(a, b) = (d_ann[a] * comm).trace() / 8.0;
    }
  }
  return m;
}

GammaMatrix GammaMatrix::build(const ChainSpec& spec, const ModeQuartet& quartet) {
  const ModeSpectrum sp = mode_spectrum(spec, quartet);
  if (sp.degenerate) {
    throw std::domain_error("degenerate quartet spectrum (zero-energy mode); use the numerical path");
  }
  if (spec.j_x * (1.0 + spec.r) <= 0.0) {
    throw std::domain_error("closed-form eigenoperators need j_x (1 + r) > 0");
  }
  const double c = std::cos(sp.theta_q / 2.0);
  const double s = std::sin(sp.theta_q / 2.0);
  GammaMatrix g;
  g.lambdas_ = sp.lambdas;
  for (int i = 0; i < 4; ++i) {
    const double hi = sp.h_over_lambda[i];
    const double plus = 1.0 + hi;
    const double minus = 1.0 - hi;
    const double norm = 1.0 / std::sqrt(2.0 * (1.0 + hi * hi));
    if (i % 2 == 0) {
      // lambda_1, lambda_3 = -|e| -+ sqrt(|e|^2 + h^2)
      g.entries_.row(i) << c * plus, c * minus, -kI * s * plus, -kI * s * minus;
    } else {
      // lambda_2, lambda_4 = |e| -+ sqrt(|e|^2 + h^2)
      g.entries_.row(i) << s * plus, s * minus, kI * c * plus, kI * c * minus;
    }
    g.entries_.row(i) *= norm;
  }
  return g;
}

std::array<Complex, 4> heisenberg_beta(const ChainSpec& spec, const ModeQuartet& quartet,
                                       double t) {
  const GammaMatrix gamma = GammaMatrix::build(spec, quartet);
  const Mat4& g = gamma.entries();
  const int col_q = slot_index(Slot::q);
  std::array<Complex, 4> beta{};
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) {
      beta[j] += std::exp(-2.0 * kI * gamma.lambdas()[i] * t) * std::conj(g(i, col_q)) * g(i, j);
    }
  }
  return beta;
}

ModeState apply_evolved_operator(const ModeState& state, const ModeHamiltonian& h_q, Slot slot,
                                 double t, bool dagger) {
  const auto& ops = FermionOps::get();
  const Mat16& op = dagger ? ops.create(slot) : ops.annihilate(slot);
  ModeState out = h_q.evolve(state, -t);
  out.amplitudes = op * out.amplitudes;
  return h_q.evolve(out, t);
}

Complex correlator_C(const ChainSpec& spec_f, const ChainSpec& spec_b, const ModeQuartet& quartet,
                     Slot k, Slot q, double t) {
  const ModeHamiltonian hf = build_mode_hamiltonian(spec_f, quartet);
  const ModeHamiltonian hb = build_mode_hamiltonian(spec_b, quartet);
  ModeState ket = evolve_vacuum(hf, t);
  ket = apply_evolved_operator(ket, hf, q, t, true);
  ket = apply_evolved_operator(ket, hb, k, t, false);
  const ModeState bra = evolve_vacuum(hb, t);
  return bra.amplitudes.dot(ket.amplitudes);
}

}  // namespace kitaev
