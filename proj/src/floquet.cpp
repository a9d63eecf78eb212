#include "kitaev/floquet.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "kitaev/format.hpp"
#include "kitaev/parallel.hpp"

namespace kitaev {

namespace {

constexpr Complex kI{0.0, 1.0};

std::pair<Complex, Complex> v_roots(double abs_e, double h, double tau, double sign) {
  const Complex z = std::exp(sign * 4.0 * kI * abs_e * tau);
  const double c = std::cos(2.0 * h * tau);
  const Complex d = std::sqrt((z + 1.0) * (z + 1.0) * c * c - 4.0 * z);
  return {0.5 * ((z + 1.0) * c + d), 0.5 * ((z + 1.0) * c - d)};
}

}  // namespace

void KickSpec::validate() const {
  base.validate();
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("kick period must be positive");
  if (!std::isfinite(h_kick)) throw std::invalid_argument("kick field must be finite");
}

FloquetOperator::FloquetOperator(const Mat16& matrix) : matrix_(matrix) {
  Eigen::ComplexSchur<Mat16> schur(matrix_);
  if (schur.info() != Eigen::Success) throw std::runtime_error("Floquet Schur decomposition failed");
  eigenvectors_ = schur.matrixU();
  for (int i = 0; i < kQuartetDim; ++i) {
    phases_(i) = std::arg(schur.matrixT()(i, i));
    eigenvalues_(i) = std::polar(1.0, phases_(i));
  }
}

Vec16 FloquetOperator::power_phases(long long n) const {
  Vec16 p;
  for (int i = 0; i < kQuartetDim; ++i) {
    p(i) = std::polar(1.0, std::remainder(static_cast<double>(n) * phases_(i), 2.0 * kPi));
  }
  return p;
}

Mat16 FloquetOperator::power(long long n) const {
  return eigenvectors_ * power_phases(n).asDiagonal() * eigenvectors_.adjoint();
}

FloquetOperator build_floquet(const KickSpec& kick, const ModeQuartet& quartet) {
  kick.validate();
  const ModeHamiltonian interaction = build_mode_hamiltonian(kick.base.with_field(0.0), quartet);
  // field part of H_q: h (n - 2), the quartet share of h sum_j (2 n_j - 1)
  Mat16 kick_part = Mat16::Zero();
  for (int b = 0; b < kQuartetDim; ++b) {
    const double n_b = std::popcount(static_cast<unsigned>(b)) - 2.0;
    kick_part(b, b) = std::exp(-2.0 * kI * kick.tau * kick.h_kick * n_b);
  }
  return FloquetOperator(interaction.propagator(kick.tau) * kick_part);
}

std::array<Complex, 4> analytic_v_eigenvalues(const KickSpec& kick, const ModeQuartet& quartet) {
  kick.validate();
  const double e = mode_energy_scale(kick.base, quartet.q);
  const auto [plus, minus] = v_roots(e, kick.h_kick, kick.tau, 1.0);
  const auto [plus_p, minus_p] = v_roots(e, kick.h_kick, kick.tau, -1.0);
  return {plus, minus, plus_p, minus_p};
}

std::array<Complex, 4> analytic_floquet_products(const KickSpec& kick, const ModeQuartet& quartet) {
  const auto l = analytic_v_eigenvalues(kick, quartet);
  return {l[0] * l[2], l[1] * l[2], l[0] * l[3], l[1] * l[3]};
}

ModeState kicked_state(const KickSpec& kick, const ModeQuartet& quartet, long long n,
                       const ModeState& initial) {
  if (n < 0) throw std::invalid_argument("kick count must be nonnegative");
  const FloquetOperator u = build_floquet(kick, quartet);
  Vec16 coeffs = u.eigenvectors().adjoint() * initial.amplitudes;
  coeffs = coeffs.cwiseProduct(u.power_phases(n));
  return ModeState{u.eigenvectors() * coeffs};
}

KickedQuench::KickedQuench(const KickSpec& forward, const KickSpec& backward)
    : forward_(forward), backward_(backward) {
  forward_.validate();
  backward_.validate();
  if (forward_.base.n_sites != backward_.base.n_sites) {
    throw std::invalid_argument("forward and backward kicks differ in n_sites");
  }
  if (forward_.tau != backward_.tau) {
    throw std::invalid_argument("forward and backward kicks differ in tau");
  }
  quartets_ = momentum_grid(n_sites());
  for (const auto& quartet : quartets_) {
    forward_ops_.push_back(build_floquet(forward_, quartet));
    backward_ops_.push_back(build_floquet(backward_, quartet));
    forward_props_.emplace_back(forward_ops_.back().eigenvectors());
    backward_props_.emplace_back(backward_ops_.back().eigenvectors());
  }
}

std::vector<QuartetAmplitudes> KickedQuench::amplitudes(long long n) const {
  if (n < 0) throw std::invalid_argument("kick count must be nonnegative");
  std::vector<QuartetAmplitudes> out(quartets_.size());
  for (std::size_t m = 0; m < quartets_.size(); ++m) {
    out[m] = quartet_amplitudes(forward_props_[m].columns(forward_ops_[m].power_phases(n)),
                                backward_props_[m].columns(backward_ops_[m].power_phases(n)));
  }
  return out;
}

double KickedQuench::loschmidt(const InitialState& state, long long n) const {
  return assemble_loschmidt(amplitudes(n), n_sites(), state);
}

double KickedQuench::momentum_dist(const InitialState& state, double k, long long n) const {
  return assemble_momentum_dist(amplitudes(n), n_sites(), state, locate_momentum(n_sites(), k));
}

MetaRecord KickedQuench::describe() const {
  return {{"n_sites", std::to_string(n_sites())},
          {"j_x", format_number(forward_.base.j_x)},
          {"r_f", format_number(forward_.base.r)},
          {"r_b", format_number(backward_.base.r)},
          {"h_f", format_number(forward_.h_kick)},
          {"h_b", format_number(backward_.h_kick)},
          {"tau", format_number(forward_.tau)}};
}

EchoSeries KickedQuench::echo_series(const InitialState& state, long long n_max,
                                     int workers) const {
  if (n_max < 0) throw std::invalid_argument("kick count must be nonnegative");
  if (const auto* d = std::get_if<DefiniteMomentumState>(&state)) locate_momentum(n_sites(), d->q);
  const auto count = static_cast<std::size_t>(n_max + 1);
  EchoSeries series;
  series.axis = "n";
  series.observable = "L";
  series.grid.resize(count);
  series.values.resize(count);
  parallel_for(count, workers, [&](std::size_t i) {
    series.grid[i] = static_cast<double>(i);
    series.values[i] = loschmidt(state, static_cast<long long>(i));
  });
  series.meta = describe();
  series.meta.emplace_back("state", kitaev::describe(state));
  return series;
}

double kicked_loschmidt(const KickSpec& kick_f, const KickSpec& kick_b, long long n,
                        const InitialState& state) {
  return KickedQuench(kick_f, kick_b).loschmidt(state, n);
}

}  // namespace kitaev
