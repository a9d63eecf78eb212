// Stroboscopic dynamics under a delta-kicked transverse field.
//
// One period is U = exp(-2i tau H_q^int) exp(-2i tau H_q^z) per quartet, with the same
// factor-2 convention as the constant-field mode Hamiltonian; the field part acts first.
#pragma once

#include <array>
#include <span>

#include "kitaev/echo.hpp"
#include "kitaev/mode_engine.hpp"
#include "kitaev/model.hpp"

namespace kitaev {

struct KickSpec {
  ChainSpec base;  // n_sites, j_x, r; base.h is ignored
  double tau = kPi / 4.0;
  double h_kick = 1.0;

  /// Throws std::invalid_argument for an invalid base or tau <= 0.
  void validate() const;
  /// Constant-field chain with the kick strength, whose dynamics the kicks approximate.
  ChainSpec averaged() const { return base.with_field(h_kick); }
};

class FloquetOperator {
 public:
  /// Takes a unitary one-period matrix and caches its Schur eigendecomposition.
  explicit FloquetOperator(const Mat16& matrix);

  const Mat16& matrix() const { return matrix_; }
  /// Unimodular eigenvalues exp(i phase).
  const Vec16& eigenvalues() const { return eigenvalues_; }
  const Real16& phases() const { return phases_; }
  /// Unitary eigenvector matrix.
  const Mat16& eigenvectors() const { return eigenvectors_; }

  /// exp(i n phase) for every eigenvalue.
  Vec16 power_phases(long long n) const;
  /// U^n through the eigendecomposition.
  Mat16 power(long long n) const;

 private:
  Mat16 matrix_;
  Vec16 eigenvalues_;
  Real16 phases_;
  Mat16 eigenvectors_;
};

FloquetOperator build_floquet(const KickSpec& kick, const ModeQuartet& quartet);

/// (lambda_+, lambda_-, lambda_+', lambda_-') with
///   lambda_+- = [(z+1) cos(2 h tau) +- sqrt((z+1)^2 cos^2(2 h tau) - 4z)] / 2,
/// z = exp(4 i |e| tau), and the primed pair from z -> conj(z).
std::array<Complex, 4> analytic_v_eigenvalues(const KickSpec& kick, const ModeQuartet& quartet);

/// {lambda_+ lambda_+', lambda_- lambda_+', lambda_+ lambda_-', lambda_- lambda_-'}
std::array<Complex, 4> analytic_floquet_products(const KickSpec& kick, const ModeQuartet& quartet);

/// U^n |initial>. Throws std::invalid_argument for n < 0.
ModeState kicked_state(const KickSpec& kick, const ModeQuartet& quartet, long long n,
                       const ModeState& initial);

/// Forward/backward kicked evolutions with cached per-quartet Floquet operators.
class KickedQuench {
 public:
  /// Throws std::invalid_argument unless both kicks are valid and share n_sites and tau.
  KickedQuench(const KickSpec& forward, const KickSpec& backward);

  const KickSpec& forward() const { return forward_; }
  const KickSpec& backward() const { return backward_; }
  int n_sites() const { return forward_.base.n_sites; }
  const FloquetOperator& forward_operator(int m) const { return forward_ops_[m]; }
  const FloquetOperator& backward_operator(int m) const { return backward_ops_[m]; }

  std::vector<QuartetAmplitudes> amplitudes(long long n) const;
  double loschmidt(const InitialState& state, long long n) const;
  double momentum_dist(const InitialState& state, double k, long long n) const;

  /// L after each kick count 0..n_max; grid holds n.
  EchoSeries echo_series(const InitialState& state, long long n_max, int workers = 1) const;
  MetaRecord describe() const;

 private:
  KickSpec forward_;
  KickSpec backward_;
  std::vector<ModeQuartet> quartets_;
  std::vector<FloquetOperator> forward_ops_;
  std::vector<FloquetOperator> backward_ops_;
  std::vector<SpectralPropagator> forward_props_;
  std::vector<SpectralPropagator> backward_props_;
};

double kicked_loschmidt(const KickSpec& kick_f, const KickSpec& kick_b, long long n,
                        const InitialState& state);

}  // namespace kitaev
