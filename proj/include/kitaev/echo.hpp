// Chain-level observables assembled from quartet amplitudes: Loschmidt echo for the three
// initial states, momentum distributions, averages and the peak-scaling fit.
#pragma once

#include <complex>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "kitaev/mode_engine.hpp"
#include "kitaev/model.hpp"

namespace kitaev {

/// |00..00>
struct VacuumState {};
/// c_q^+ |00..00>
struct DefiniteMomentumState {
  double q = 0.0;
};
/// c_1^+ |00..00> = N^{-1/2} sum_q e^{-iq} c_q^+ |00..00>
struct UniformSiteState {};

using InitialState = std::variant<VacuumState, DefiniteMomentumState, UniformSiteState>;

std::string describe(const InitialState& state);

/// Per-quartet overlaps between the forward and backward propagated sectors:
///   vacuum    = <0|W_b^+ W_f|0>                 (A_q)
///   single(k, q) = <0|c_k W_b^+ W_f c_q^+|0>    (C(k,q))
struct QuartetAmplitudes {
  Complex vacuum{1.0, 0.0};
  Mat4 single = Mat4::Identity();
};

QuartetAmplitudes quartet_amplitudes(const Mat16& w_forward, const Mat16& w_backward);

using LowBlock = Eigen::Matrix<Complex, kQuartetDim, 5>;

/// Unitary W = V diag(p) V^+ with fixed eigenvectors V, evaluated only on the five
/// states holding at most one fermion (vacuum, then c_a^+|0> in slot order).
class SpectralPropagator {
 public:
  explicit SpectralPropagator(const Mat16& eigenvectors);

  /// Columns of W for the five low states.
  LowBlock columns(const Vec16& phases) const;

 private:
  Mat16 vectors_;
  LowBlock projected_;
};

/// Amplitudes from the low columns of W_f and W_b.
QuartetAmplitudes quartet_amplitudes(const LowBlock& w_forward, const LowBlock& w_backward);

// Assembly from one time point's amplitudes (one entry per quartet, grid order). Products
// over quartets are taken in index order.
double assemble_loschmidt_vacuum(std::span<const QuartetAmplitudes> amps);
double assemble_loschmidt_definite(std::span<const QuartetAmplitudes> amps, MomentumSlot q);
double assemble_momentum_dist_definite(std::span<const QuartetAmplitudes> amps, MomentumSlot q,
                                       MomentumSlot k);
double assemble_loschmidt_uniform(std::span<const QuartetAmplitudes> amps, int n_sites);
double assemble_momentum_dist_uniform(std::span<const QuartetAmplitudes> amps, int n_sites,
                                      MomentumSlot k);
double assemble_loschmidt(std::span<const QuartetAmplitudes> amps, int n_sites,
                          const InitialState& state);
/// P(k) for a one-magnon state. Throws std::invalid_argument for the vacuum state.
double assemble_momentum_dist(std::span<const QuartetAmplitudes> amps, int n_sites,
                              const InitialState& state, MomentumSlot k);

/// Uniform grid 0, dt, 2 dt, ... up to t_max (inclusive within dt/2).
struct TimeGrid {
  double t_max = 5.0;
  double dt = 0.01;

  void validate() const;
  std::vector<double> points() const;
  std::string describe() const;
};

using MetaRecord = std::vector<std::pair<std::string, std::string>>;

/// A sampled observable. `axis` names the grid variable (t, n, h_f, k, ...).
struct EchoSeries {
  std::string axis = "t";
  std::string observable = "L";
  std::vector<double> grid;
  std::vector<double> values;
  MetaRecord meta;

  std::size_t size() const { return values.size(); }
};

/// Forward/backward pair of constant-field Hamiltonians with cached quartet
/// decompositions. Immutable after construction; safe to share across threads.
class Quench {
 public:
  /// Throws std::invalid_argument when the specs are invalid or differ in n_sites.
  Quench(const ChainSpec& forward, const ChainSpec& backward);

  const ChainSpec& forward() const { return forward_; }
  const ChainSpec& backward() const { return backward_; }
  int n_sites() const { return forward_.n_sites; }
  const std::vector<ModeQuartet>& quartets() const { return quartets_; }
  const ModeHamiltonian& forward_mode(int m) const { return forward_modes_[m]; }
  const ModeHamiltonian& backward_mode(int m) const { return backward_modes_[m]; }

  std::vector<QuartetAmplitudes> amplitudes(double t) const;

  double loschmidt(const InitialState& state, double t) const;
  double momentum_dist(const InitialState& state, double k, double t) const;
  /// P(k, t) over allowed_momenta(N), ascending in k.
  std::vector<double> momentum_profile(const InitialState& state, double t) const;

  EchoSeries echo_series(const InitialState& state, std::span<const double> times,
                         int workers = 1) const;
  EchoSeries momentum_series(const InitialState& state, double k, std::span<const double> times,
                             int workers = 1) const;
  MetaRecord describe() const;

 private:
  ChainSpec forward_;
  ChainSpec backward_;
  std::vector<ModeQuartet> quartets_;
  std::vector<ModeHamiltonian> forward_modes_;
  std::vector<ModeHamiltonian> backward_modes_;
  std::vector<SpectralPropagator> forward_props_;
  std::vector<SpectralPropagator> backward_props_;
};

double loschmidt_vacuum(const ChainSpec& spec_f, const ChainSpec& spec_b, double t);
double loschmidt_definite_q(const ChainSpec& spec_f, const ChainSpec& spec_b, double q, double t);
double momentum_dist_definite_q(const ChainSpec& spec_f, const ChainSpec& spec_b, double q,
                                double k, double t);
double loschmidt_uniform(const ChainSpec& spec_f, const ChainSpec& spec_b, double t);
double momentum_dist_uniform(const ChainSpec& spec_f, const ChainSpec& spec_b, double k,
                             double t);

/// Arithmetic mean of the series values. Throws on an empty series.
double time_average(const EchoSeries& series);

/// Averaging horizon in units of 1/j_x: 500 for N <= 48, 5 above.
double default_average_horizon(int n_sites);

/// Sliding mean over window_len consecutive samples; the output grid holds the mean grid
/// value of each window. Throws std::invalid_argument when window_len is 0 or exceeds the
/// series length.
EchoSeries window_average(const EchoSeries& series, std::size_t window_len);

struct PowerLawFit {
  double amplitude = 0.0;
  double exponent = 0.0;
  std::vector<double> sizes;
  std::vector<double> peaks;
};

/// Least squares of log P against log N. Throws std::invalid_argument for fewer than two
/// points or mismatched lengths, std::domain_error for non-positive inputs.
PowerLawFit fit_power_law(std::span<const double> sizes, std::span<const double> peaks);

/// max_k P(k, t_star) of the uniform state for each size, then a power-law fit. The
/// templates supply r, j_x and the fields; n_sites is overridden. Needs >= 4 sizes, each
/// a valid chain length.
PowerLawFit peak_scaling_fit(const ChainSpec& forward_template, const ChainSpec& backward_template,
                             std::span<const int> sizes, double t_star, int workers = 1);

/// L(t_star) for each forward field in h_f_values (non-decreasing), backward fixed.
EchoSeries field_sweep(const ChainSpec& spec_b, std::span<const double> h_f_values, double t_star,
                       const InitialState& state, int workers = 1);

}  // namespace kitaev
