#include "kitaev/echo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "kitaev/format.hpp"
#include "kitaev/parallel.hpp"

namespace kitaev {

namespace {

constexpr Complex kI{0.0, 1.0};

// Basis indices of |0> and c_a^+|0> for a in slot order.
constexpr std::array<int, 5> kLowStates{0, 8, 4, 2, 1};

// rest[m] = product of vacuum amplitudes over all quartets except m, in index order.
std::vector<Complex> products_excluding(std::span<const QuartetAmplitudes> amps) {
  const std::size_t n = amps.size();
  std::vector<Complex> prefix(n + 1, Complex{1.0, 0.0});
  std::vector<Complex> suffix(n + 1, Complex{1.0, 0.0});
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] * amps[i].vacuum;
  for (std::size_t i = n; i > 0; --i) suffix[i - 1] = suffix[i] * amps[i - 1].vacuum;
  std::vector<Complex> rest(n);
  for (std::size_t i = 0; i < n; ++i) rest[i] = prefix[i] * suffix[i + 1];
  return rest;
}

Complex product_all(std::span<const QuartetAmplitudes> amps) {
  Complex p{1.0, 0.0};
  for (const auto& a : amps) p *= a.vacuum;
  return p;
}

void check_quartet(std::span<const QuartetAmplitudes> amps, const MomentumSlot& ms) {
  if (ms.quartet < 0 || static_cast<std::size_t>(ms.quartet) >= amps.size()) {
    throw std::out_of_range("momentum slot refers to a quartet outside the chain");
  }
}

std::array<double, 4> quartet_momenta(int n_sites, int quartet) {
  std::array<double, 4> ks{};
  for (Slot s : kAllSlots) ks[slot_index(s)] = momentum_of(n_sites, MomentumSlot{quartet, s});
  return ks;
}

void require_same_chain(const ChainSpec& f, const ChainSpec& b) {
  f.validate();
  b.validate();
  if (f.n_sites != b.n_sites) {
    throw std::invalid_argument("forward and backward chains differ in n_sites (" +
                                std::to_string(f.n_sites) + " vs " + std::to_string(b.n_sites) +
                                ")");
  }
}

}  // namespace

std::string describe(const InitialState& state) {
  struct Visitor {
    std::string operator()(const VacuumState&) const { return "vacuum"; }
    std::string operator()(const DefiniteMomentumState& s) const {
      return "magnon:" + format_number(s.q);
    }
    std::string operator()(const UniformSiteState&) const { return "uniform"; }
  };
  return std::visit(Visitor{}, state);
}

QuartetAmplitudes quartet_amplitudes(const LowBlock& w_forward, const LowBlock& w_backward) {
  const Eigen::Matrix<Complex, 5, 5> o = w_backward.adjoint() * w_forward;
  QuartetAmplitudes out;
  out.vacuum = o(0, 0);
  out.single = o.bottomRightCorner<4, 4>();
  return out;
}

QuartetAmplitudes quartet_amplitudes(const Mat16& w_forward, const Mat16& w_backward) {
  LowBlock f;
  LowBlock b;
  for (int c = 0; c < 5; ++c) {
    f.col(c) = w_forward.col(kLowStates[c]);
    b.col(c) = w_backward.col(kLowStates[c]);
  }
  return quartet_amplitudes(f, b);
}

SpectralPropagator::SpectralPropagator(const Mat16& eigenvectors) : vectors_(eigenvectors) {
  for (int c = 0; c < 5; ++c) projected_.col(c) = vectors_.row(kLowStates[c]).adjoint();
}

LowBlock SpectralPropagator::columns(const Vec16& phases) const {
  return vectors_ * (phases.asDiagonal() * projected_);
}

double assemble_loschmidt_vacuum(std::span<const QuartetAmplitudes> amps) {
  return std::norm(product_all(amps));
}

double assemble_loschmidt_definite(std::span<const QuartetAmplitudes> amps, MomentumSlot q) {
  return assemble_momentum_dist_definite(amps, q, q);
}

double assemble_momentum_dist_definite(std::span<const QuartetAmplitudes> amps, MomentumSlot q,
                                       MomentumSlot k) {
  check_quartet(amps, q);
  check_quartet(amps, k);
  if (k.quartet != q.quartet) return 0.0;
  Complex rest{1.0, 0.0};
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (static_cast<int>(i) != q.quartet) rest *= amps[i].vacuum;
  }
  return std::norm(rest) * std::norm(amps[q.quartet].single(slot_index(k.slot), slot_index(q.slot)));
}

double assemble_loschmidt_uniform(std::span<const QuartetAmplitudes> amps, int n_sites) {
  if (amps.size() * 4 != static_cast<std::size_t>(n_sites)) {
    throw std::invalid_argument("amplitude count does not match the chain length");
  }
  const std::vector<Complex> rest = products_excluding(amps);
  Complex total{0.0, 0.0};
  for (std::size_t m = 0; m < amps.size(); ++m) {
    const auto ks = quartet_momenta(n_sites, static_cast<int>(m));
    Complex inner{0.0, 0.0};
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        inner += std::exp(kI * (ks[a] - ks[b])) * amps[m].single(a, b);
      }
    }
    total += rest[m] * inner;
  }
  return std::norm(total / static_cast<double>(n_sites));
}

double assemble_momentum_dist_uniform(std::span<const QuartetAmplitudes> amps, int n_sites,
                                      MomentumSlot k) {
  check_quartet(amps, k);
  const auto ks = quartet_momenta(n_sites, k.quartet);
  Complex rest{1.0, 0.0};
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (static_cast<int>(i) != k.quartet) rest *= amps[i].vacuum;
  }
  const int a = slot_index(k.slot);
  Complex sum{0.0, 0.0};
  for (int b = 0; b < 4; ++b) sum += std::exp(-kI * ks[b]) * amps[k.quartet].single(a, b);
  return std::norm(rest) * std::norm(sum) / static_cast<double>(n_sites);
}

double assemble_loschmidt(std::span<const QuartetAmplitudes> amps, int n_sites,
                          const InitialState& state) {
  if (std::holds_alternative<VacuumState>(state)) return assemble_loschmidt_vacuum(amps);
  if (const auto* d = std::get_if<DefiniteMomentumState>(&state)) {
    return assemble_loschmidt_definite(amps, locate_momentum(n_sites, d->q));
  }
  return assemble_loschmidt_uniform(amps, n_sites);
}

double assemble_momentum_dist(std::span<const QuartetAmplitudes> amps, int n_sites,
                              const InitialState& state, MomentumSlot k) {
  if (std::holds_alternative<VacuumState>(state)) {
    throw std::invalid_argument("momentum distribution needs a one-magnon initial state");
  }
  if (const auto* d = std::get_if<DefiniteMomentumState>(&state)) {
    return assemble_momentum_dist_definite(amps, locate_momentum(n_sites, d->q), k);
  }
  return assemble_momentum_dist_uniform(amps, n_sites, k);
}

void TimeGrid::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (!(t_max >= 0.0) || !std::isfinite(t_max)) {
    throw std::invalid_argument("t_max must be nonnegative");
  }
}

std::vector<double> TimeGrid::points() const {
  validate();
  const auto steps = static_cast<std::size_t>(std::floor(t_max / dt + 0.5));
  std::vector<double> ts(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) ts[i] = static_cast<double>(i) * dt;
  return ts;
}

std::string TimeGrid::describe() const {
  return "0:" + format_number(dt) + ":" + format_number(t_max);
}

Quench::Quench(const ChainSpec& forward, const ChainSpec& backward)
    : forward_(forward), backward_(backward) {
  require_same_chain(forward_, backward_);
  quartets_ = momentum_grid(forward_.n_sites);
  forward_modes_.reserve(quartets_.size());
  backward_modes_.reserve(quartets_.size());
  for (const auto& quartet : quartets_) {
    forward_modes_.push_back(build_mode_hamiltonian(forward_, quartet));
    backward_modes_.push_back(build_mode_hamiltonian(backward_, quartet));
    forward_props_.emplace_back(forward_modes_.back().eigenvectors());
    backward_props_.emplace_back(backward_modes_.back().eigenvectors());
  }
}

std::vector<QuartetAmplitudes> Quench::amplitudes(double t) const {
  std::vector<QuartetAmplitudes> out(quartets_.size());
  for (std::size_t m = 0; m < quartets_.size(); ++m) {
    Vec16 pf;
    Vec16 pb;
    for (int i = 0; i < kQuartetDim; ++i) {
      pf(i) = std::exp(-2.0 * kI * forward_modes_[m].eigenvalues()(i) * t);
      pb(i) = std::exp(-2.0 * kI * backward_modes_[m].eigenvalues()(i) * t);
    }
    out[m] = quartet_amplitudes(forward_props_[m].columns(pf), backward_props_[m].columns(pb));
  }
  return out;
}

double Quench::loschmidt(const InitialState& state, double t) const {
  return assemble_loschmidt(amplitudes(t), n_sites(), state);
}

double Quench::momentum_dist(const InitialState& state, double k, double t) const {
  const MomentumSlot ks = locate_momentum(n_sites(), k);
  return assemble_momentum_dist(amplitudes(t), n_sites(), state, ks);
}

std::vector<double> Quench::momentum_profile(const InitialState& state, double t) const {
  const auto amps = amplitudes(t);
  const auto ks = allowed_momenta(n_sites());
  std::vector<double> out;
  out.reserve(ks.size());
  for (double k : ks) {
    out.push_back(assemble_momentum_dist(amps, n_sites(), state, locate_momentum(n_sites(), k)));
  }
  return out;
}

MetaRecord Quench::describe() const {
  return {{"n_sites", std::to_string(n_sites())},
          {"j_x", format_number(forward_.j_x)},
          {"r_f", format_number(forward_.r)},
          {"r_b", format_number(backward_.r)},
          {"h_f", format_number(forward_.h)},
          {"h_b", format_number(backward_.h)}};
}

EchoSeries Quench::echo_series(const InitialState& state, std::span<const double> times,
                               int workers) const {
  if (const auto* d = std::get_if<DefiniteMomentumState>(&state)) locate_momentum(n_sites(), d->q);
  EchoSeries series;
  series.axis = "t";
  series.observable = "L";
  series.grid.assign(times.begin(), times.end());
  series.values.resize(times.size());
  parallel_for(times.size(), workers,
               [&](std::size_t i) { series.values[i] = loschmidt(state, times[i]); });
  series.meta = describe();
  series.meta.emplace_back("state", kitaev::describe(state));
  return series;
}

EchoSeries Quench::momentum_series(const InitialState& state, double k,
                                   std::span<const double> times, int workers) const {
  const MomentumSlot ks = locate_momentum(n_sites(), k);
  if (std::holds_alternative<VacuumState>(state)) {
    throw std::invalid_argument("momentum distribution needs a one-magnon initial state");
  }
  EchoSeries series;
  series.axis = "t";
  series.observable = "P";
  series.grid.assign(times.begin(), times.end());
  series.values.resize(times.size());
  parallel_for(times.size(), workers, [&](std::size_t i) {
    series.values[i] = assemble_momentum_dist(amplitudes(times[i]), n_sites(), state, ks);
  });
  series.meta = describe();
  series.meta.emplace_back("state", kitaev::describe(state));
  series.meta.emplace_back("k", format_number(k));
  return series;
}

double loschmidt_vacuum(const ChainSpec& spec_f, const ChainSpec& spec_b, double t) {
  return Quench(spec_f, spec_b).loschmidt(VacuumState{}, t);
}

double loschmidt_definite_q(const ChainSpec& spec_f, const ChainSpec& spec_b, double q, double t) {
  return Quench(spec_f, spec_b).loschmidt(DefiniteMomentumState{q}, t);
}

double momentum_dist_definite_q(const ChainSpec& spec_f, const ChainSpec& spec_b, double q,
                                double k, double t) {
  return Quench(spec_f, spec_b).momentum_dist(DefiniteMomentumState{q}, k, t);
}

double loschmidt_uniform(const ChainSpec& spec_f, const ChainSpec& spec_b, double t) {
  return Quench(spec_f, spec_b).loschmidt(UniformSiteState{}, t);
}

double momentum_dist_uniform(const ChainSpec& spec_f, const ChainSpec& spec_b, double k,
                             double t) {
  return Quench(spec_f, spec_b).momentum_dist(UniformSiteState{}, k, t);
}

double time_average(const EchoSeries& series) {
  if (series.values.empty()) throw std::invalid_argument("time average of an empty series");
  return std::accumulate(series.values.begin(), series.values.end(), 0.0) /
         static_cast<double>(series.values.size());
}

double default_average_horizon(int n_sites) { return n_sites <= 48 ? 500.0 : 5.0; }

EchoSeries window_average(const EchoSeries& series, std::size_t window_len) {
  if (window_len == 0) throw std::invalid_argument("window length must be positive");
  if (window_len > series.values.size()) {
    throw std::invalid_argument("window length " + std::to_string(window_len) +
                                " exceeds series length " + std::to_string(series.values.size()));
  }
  EchoSeries out;
  out.axis = series.axis;
  out.observable = series.observable;
  out.meta = series.meta;
  out.meta.emplace_back("window", std::to_string(window_len));
  const std::size_t count = series.values.size() - window_len + 1;
  out.grid.resize(count);
  out.values.resize(count);
  const double w = static_cast<double>(window_len);
  for (std::size_t i = 0; i < count; ++i) {
    double g = 0.0;
    double v = 0.0;
    for (std::size_t j = i; j < i + window_len; ++j) {
      g += series.grid.empty() ? 0.0 : series.grid[j];
      v += series.values[j];
    }
    out.grid[i] = g / w;
    out.values[i] = v / w;
  }
  return out;
}

PowerLawFit fit_power_law(std::span<const double> sizes, std::span<const double> peaks) {
  if (sizes.size() != peaks.size()) throw std::invalid_argument("sizes and peaks differ in length");
  if (sizes.size() < 2) throw std::invalid_argument("power-law fit needs at least two points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (!(sizes[i] > 0.0) || !(peaks[i] > 0.0)) {
      throw std::domain_error("power-law fit needs positive sizes and peak values");
    }
    const double x = std::log(sizes[i]);
    const double y = std::log(peaks[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(sizes.size());
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw std::domain_error("power-law fit needs at least two distinct sizes");
  PowerLawFit fit;
  fit.exponent = (n * sxy - sx * sy) / den;
  fit.amplitude = std::exp((sy - fit.exponent * sx) / n);
  fit.sizes.assign(sizes.begin(), sizes.end());
  fit.peaks.assign(peaks.begin(), peaks.end());
  return fit;
}

PowerLawFit peak_scaling_fit(const ChainSpec& forward_template, const ChainSpec& backward_template,
                             std::span<const int> sizes, double t_star, int workers) {
  if (sizes.size() < 4) throw std::invalid_argument("peak scaling needs at least four sizes");
  std::vector<double> ns(sizes.size());
  std::vector<double> peaks(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    ChainSpec f = forward_template;
    ChainSpec b = backward_template;
    f.n_sites = b.n_sites = sizes[i];
    require_same_chain(f, b);
    ns[i] = sizes[i];
  }
  parallel_for(sizes.size(), workers, [&](std::size_t i) {
    ChainSpec f = forward_template;
    ChainSpec b = backward_template;
    f.n_sites = b.n_sites = sizes[i];
    const auto profile = Quench(f, b).momentum_profile(UniformSiteState{}, t_star);
    peaks[i] = *std::max_element(profile.begin(), profile.end());
  });
  return fit_power_law(ns, peaks);
}

EchoSeries field_sweep(const ChainSpec& spec_b, std::span<const double> h_f_values, double t_star,
                       const InitialState& state, int workers) {
  if (h_f_values.empty()) throw std::invalid_argument("field sweep needs at least one value");
  if (!std::is_sorted(h_f_values.begin(), h_f_values.end())) {
    throw std::invalid_argument("field sweep values must be non-decreasing");
  }
  spec_b.validate();
  EchoSeries series;
  series.axis = "h_f";
  series.observable = "L";
  series.grid.assign(h_f_values.begin(), h_f_values.end());
  series.values.resize(h_f_values.size());
  parallel_for(h_f_values.size(), workers, [&](std::size_t i) {
    series.values[i] = Quench(spec_b.with_field(h_f_values[i]), spec_b).loschmidt(state, t_star);
  });
  series.meta = {{"n_sites", std::to_string(spec_b.n_sites)},
                 {"j_x", format_number(spec_b.j_x)},
                 {"r", format_number(spec_b.r)},
                 {"h_b", format_number(spec_b.h)},
                 {"t", format_number(t_star)},
                 {"state", describe(state)}};
  return series;
}

}  // namespace kitaev
