#include "kitaev/ed_oracle.hpp"

#include <lapacke.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace kitaev {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_chain(const ChainSpec& spec, int cap) {
  if (spec.n_sites < 2) throw std::invalid_argument("oracle needs at least 2 sites");
  if (spec.n_sites > cap) {
    throw std::invalid_argument("N=" + std::to_string(spec.n_sites) + " exceeds the oracle cap of " +
                                std::to_string(cap));
  }
  if (!std::isfinite(spec.j_x) || !std::isfinite(spec.r) || !std::isfinite(spec.h)) {
    throw std::invalid_argument("oracle couplings must be finite");
  }
}

int occupation(std::uint32_t state, int site) { return static_cast<int>((state >> (site - 1)) & 1u); }

// Applies c_site^+ (create) or c_site to a basis state. Returns false when the result
// vanishes; otherwise updates state and multiplies sign by the Jordan-Wigner string.
bool apply_op(std::uint32_t& state, int site, bool create, int& sign) {
  const std::uint32_t bit = 1u << (site - 1);
  if (((state & bit) != 0) == create) return false;
  if (std::popcount(state & (bit - 1)) % 2 == 1) sign = -sign;
  state ^= bit;
  return true;
}

struct Op {
  int site;
  bool create;
};

// Product of operators applied right to left.
bool apply_ops(std::uint32_t& state, std::initializer_list<Op> ops, int& sign) {
  std::vector<Op> seq(ops);
  for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
    if (!apply_op(state, it->site, it->create, sign)) return false;
  }
  return true;
}

double field_energy(std::uint32_t state, int n_sites, double h) {
  return h * (2.0 * std::popcount(state) - n_sites);
}

std::vector<int> index_map(int n_sites, const std::vector<std::uint32_t>& states) {
  std::vector<int> idx(std::size_t{1} << n_sites, -1);
  for (std::size_t i = 0; i < states.size(); ++i) idx[states[i]] = static_cast<int>(i);
  return idx;
}

// Random-probe check of H V = V diag(w) and V^T V = I.
bool decomposition_ok(const Eigen::MatrixXd& h, const Eigen::MatrixXd& v, const Eigen::VectorXd& w) {
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> normal;
  Eigen::VectorXd x(h.rows());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = normal(rng);
  const Eigen::VectorXd vx = v * x;
  const double scale = std::max(1.0, h.cwiseAbs().rowwise().sum().maxCoeff()) * x.norm();
  const double residual = (h * vx - v * w.cwiseProduct(x)).norm();
  const double drift = (v.transpose() * vx - x).norm();
  return residual <= 1e-9 * scale && drift <= 1e-9 * x.norm();
}

// LAPACK MRRR solver, validated; falls back to Eigen when the result fails the probe.
// A failed probe disables LAPACK for the rest of the process.
std::atomic<bool> lapack_trusted{true};

void diagonalize(const Eigen::MatrixXd& h, Eigen::MatrixXd& v, Eigen::VectorXd& w) {
  const auto n = static_cast<lapack_int>(h.rows());
  if (lapack_trusted.load()) {
    Eigen::MatrixXd a = h;
    v.resize(n, n);
    w.resize(n);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
    lapack_int found = 0;
    const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'A', 'U', n, a.data(), n, 0.0,
                                           0.0, 0, 0, 0.0, &found, w.data(), v.data(), n,
                                           support.data());
    if (info == 0 && found == n && decomposition_ok(h, v, w)) return;
    lapack_trusted.store(false);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) throw std::runtime_error("oracle diagonalisation failed");
  w = solver.eigenvalues();
  v = solver.eigenvectors();
}

ParitySector diagonalized_sector(const ChainSpec& spec, int parity, int cap) {
  ParitySector s;
  s.parity = parity;
  s.states = sector_states(spec.n_sites, parity);
  diagonalize(sector_matrix(spec, parity, cap), s.vectors, s.energies);
  return s;
}

Eigen::VectorXcd restrict_to(const FullState& psi, const std::vector<std::uint32_t>& states) {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(states.size()));
  for (std::size_t i = 0; i < states.size(); ++i) out(static_cast<Eigen::Index>(i)) = psi(states[i]);
  return out;
}

Eigen::VectorXcd phased(const Eigen::VectorXd& energies, const Eigen::VectorXcd& c, double t) {
  Eigen::VectorXcd out(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) out(i) = std::exp(-kI * energies(i) * t) * c(i);
  return out;
}

}  // namespace

std::vector<std::uint32_t> sector_states(int n_sites, int parity) {
  std::vector<std::uint32_t> states;
  const std::uint32_t dim = 1u << n_sites;
  const int want = parity > 0 ? 0 : 1;
  for (std::uint32_t s = 0; s < dim; ++s) {
    if (std::popcount(s) % 2 == want) states.push_back(s);
  }
  return states;
}

Eigen::MatrixXd sector_matrix(const ChainSpec& spec, int parity, int cap) {
  check_chain(spec, cap);
  const int n = spec.n_sites;
  const auto states = sector_states(n, parity);
  const auto idx = index_map(n, states);
  const auto dim = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const std::uint32_t s0 = states[static_cast<std::size_t>(col)];
    h(col, col) += field_energy(s0, n, spec.h);
    for (int j = 1; j <= n; ++j) {
      const int a = j;
      const int b = (j == n) ? 1 : j + 1;
      const double boundary = (j == n) ? -1.0 : 1.0;
      const double hop = ((j % 2 == 1) ? spec.j_x : spec.j_y()) * boundary;
      const double pair = ((j % 2 == 1) ? spec.j_x : -spec.j_y()) * boundary;
      const auto add = [&](double coef, std::initializer_list<Op> ops) {
        std::uint32_t s = s0;
        int sign = 1;
        if (apply_ops(s, ops, sign)) h(idx[s], col) += coef * sign;
      };
      add(hop, {{a, true}, {b, false}});
      add(hop, {{b, true}, {a, false}});
      add(pair, {{a, true}, {b, true}});
      add(pair, {{b, false}, {a, false}});
    }
  }
  return h;
}

FullHamiltonian FullHamiltonian::build(const ChainSpec& spec, int cap) {
  check_chain(spec, cap);
  FullHamiltonian out;
  out.spec_ = spec;
  out.even_ = diagonalized_sector(spec, 1, cap);
  out.odd_ = diagonalized_sector(spec, -1, cap);
  return out;
}

FullHamiltonian build_full_hamiltonian(const ChainSpec& spec, int cap) {
  return FullHamiltonian::build(spec, cap);
}

Eigen::VectorXd FullHamiltonian::spectrum() const {
  Eigen::VectorXd all(even_.energies.size() + odd_.energies.size());
  all << even_.energies, odd_.energies;
  std::sort(all.data(), all.data() + all.size());
  return all;
}

FullState FullHamiltonian::evolve(const FullState& psi, double t) const {
  if (static_cast<std::size_t>(psi.size()) != dimension()) {
    throw std::invalid_argument("state dimension does not match the Hamiltonian");
  }
  FullState out = FullState::Zero(psi.size());
  for (const ParitySector* s : {&even_, &odd_}) {
    const Eigen::VectorXcd c = s->vectors.transpose() * restrict_to(psi, s->states);
    const Eigen::VectorXcd y = s->vectors * phased(s->energies, c, t);
    for (std::size_t i = 0; i < s->states.size(); ++i) out(s->states[i]) = y(static_cast<Eigen::Index>(i));
  }
  return out;
}

std::vector<double> oracle_momenta(int n_sites) {
  std::vector<double> ks;
  for (int j = -n_sites / 2 + 1; j <= n_sites / 2; ++j) {
    const double k = (2.0 * j - 1.0) * kPi / n_sites;
    if (k > -kPi && k <= kPi) ks.push_back(k);
  }
  std::sort(ks.begin(), ks.end());
  return ks;
}

SparseOp site_annihilator(int n_sites, int site) {
  if (site < 1 || site > n_sites) throw std::out_of_range("site index out of range");
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_sites);
  std::vector<Eigen::Triplet<Complex>> entries;
  for (std::uint32_t s0 = 0; s0 < static_cast<std::uint32_t>(dim); ++s0) {
    std::uint32_t s = s0;
    int sign = 1;
    if (apply_op(s, site, false, sign)) entries.emplace_back(s, s0, Complex(sign, 0.0));
  }
  SparseOp op(dim, dim);
  op.setFromTriplets(entries.begin(), entries.end());
  return op;
}

SparseOp momentum_annihilator(int n_sites, double k) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_sites);
  SparseOp op(dim, dim);
  for (int j = 1; j <= n_sites; ++j) {
    op += std::exp(-kI * (k * j)) * site_annihilator(n_sites, j);
  }
  return op / std::sqrt(static_cast<double>(n_sites));
}

SparseOp momentum_creation(int n_sites, double k) {
  return SparseOp(momentum_annihilator(n_sites, k).adjoint());
}

FullState vacuum_state(int n_sites) {
  FullState psi = FullState::Zero(static_cast<Eigen::Index>(std::size_t{1} << n_sites));
  psi(0) = 1.0;
  return psi;
}

FullState prepare_state(int n_sites, const InitialState& state) {
  const FullState vac = vacuum_state(n_sites);
  if (std::holds_alternative<VacuumState>(state)) return vac;
  if (const auto* d = std::get_if<DefiniteMomentumState>(&state)) {
    return momentum_creation(n_sites, d->q) * vac;
  }
  return SparseOp(site_annihilator(n_sites, 1).adjoint()) * vac;
}

OracleQuench::OracleQuench(const ChainSpec& forward, const ChainSpec& backward, int cap)
    : forward_(FullHamiltonian::build(forward, cap)), backward_(FullHamiltonian::build(backward, cap)) {
  if (forward.n_sites != backward.n_sites) {
    throw std::invalid_argument("forward and backward chains differ in n_sites");
  }
}

std::vector<OracleSample> OracleQuench::evaluate(const InitialState& state,
                                                 std::span<const double> times) const {
  const int n = forward_.n_sites();
  const FullState psi0 = prepare_state(n, state);
  const auto ks = oracle_momenta(n);
  const FullState vac = vacuum_state(n);

  struct Prepared {
    const ParitySector* f;
    const ParitySector* b;
    Eigen::VectorXcd cf;                   // psi0 in the forward eigenbasis
    Eigen::VectorXcd wb;                   // psi0 in the backward eigenbasis
    std::vector<Eigen::VectorXcd> wk;      // c_k^+|0> in the backward eigenbasis
  };
  std::vector<Prepared> parts;
  for (int parity : {1, -1}) {
    Prepared p{&forward_.sector(parity), &backward_.sector(parity), {}, {}, {}};
    const Eigen::VectorXcd x0 = restrict_to(psi0, p.f->states);
    if (x0.squaredNorm() == 0.0) continue;
    p.cf = p.f->vectors.transpose() * x0;
    p.wb = p.b->vectors.transpose() * x0;
    if (parity < 0) {
      for (double k : ks) {
        const FullState ek = momentum_creation(n, k) * vac;
        p.wk.push_back(p.b->vectors.transpose() * restrict_to(ek, p.b->states));
      }
    }
    parts.push_back(std::move(p));
  }

  std::vector<OracleSample> out(times.size());
  for (std::size_t it = 0; it < times.size(); ++it) {
    const double t = times[it];
    Complex amp{0.0, 0.0};
    std::vector<Complex> pk(ks.size(), Complex{0.0, 0.0});
    for (const auto& p : parts) {
      const Eigen::VectorXcd y = p.f->vectors * phased(p.f->energies, p.cf, t);
      const Eigen::VectorXcd d = phased(p.b->energies, p.b->vectors.transpose() * y, -t);
      amp += p.wb.dot(d);
      for (std::size_t i = 0; i < p.wk.size(); ++i) pk[i] += p.wk[i].dot(d);
    }
    out[it].loschmidt = std::norm(amp);
    out[it].momentum_dist.resize(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) out[it].momentum_dist[i] = std::norm(pk[i]);
  }
  return out;
}

namespace {

std::size_t momentum_position(int n_sites, double k) {
  const auto ks = oracle_momenta(n_sites);
  const double kr = reduce_momentum(k);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (std::abs(ks[i] - kr) < 1e-9) return i;
  }
  throw std::invalid_argument("momentum " + std::to_string(k) + " is not allowed for N=" +
                              std::to_string(n_sites));
}

}  // namespace

double oracle_loschmidt(const ChainSpec& spec_f, const ChainSpec& spec_b, const InitialState& state,
                        double t, int cap) {
  const double ts[] = {t};
  return OracleQuench(spec_f, spec_b, cap).evaluate(state, ts).front().loschmidt;
}

double oracle_momentum_dist(const ChainSpec& spec_f, const ChainSpec& spec_b,
                            const InitialState& state, double k, double t, int cap) {
  const std::size_t pos = momentum_position(spec_f.n_sites, k);
  const double ts[] = {t};
  return OracleQuench(spec_f, spec_b, cap).evaluate(state, ts).front().momentum_dist[pos];
}

double oracle_momentum_dist_heisenberg(const ChainSpec& spec_f, const ChainSpec& spec_b,
                                       const InitialState& state, double k, double t, int cap) {
  if (std::holds_alternative<VacuumState>(state)) {
    throw std::invalid_argument("momentum distribution needs a one-magnon initial state");
  }
  momentum_position(spec_f.n_sites, k);
  const FullHamiltonian hf = FullHamiltonian::build(spec_f, cap);
  const FullHamiltonian hb = FullHamiltonian::build(spec_b, cap);
  const int n = spec_f.n_sites;
  const FullState vac = vacuum_state(n);
  const SparseOp create = std::holds_alternative<UniformSiteState>(state)
                              ? SparseOp(site_annihilator(n, 1).adjoint())
                              : momentum_creation(n, std::get<DefiniteMomentumState>(state).q);
  const SparseOp annihilate = momentum_annihilator(n, k);
  const FullState phi_f = hf.evolve(vac, t);
  const FullState phi_b = hb.evolve(vac, t);
  // (U_f a^+ U_f^+) phi_f, then (U_b c_k U_b^+) on the result
  FullState ket = hf.evolve(create * hf.evolve(phi_f, -t), t);
  ket = hb.evolve(annihilate * hb.evolve(ket, -t), t);
  return std::norm(phi_b.dot(ket));
}

std::vector<double> oracle_kicked_series(const KickSpec& kick_f, const KickSpec& kick_b,
                                         const InitialState& state, long long n_max, int cap) {
  if (n_max < 0) throw std::invalid_argument("kick count must be nonnegative");
  if (!(kick_f.tau > 0.0) || !(kick_b.tau > 0.0)) throw std::invalid_argument("kick period must be positive");
  const int n = kick_f.base.n_sites;
  if (kick_b.base.n_sites != n) throw std::invalid_argument("kicks differ in n_sites");
  const FullHamiltonian int_f = FullHamiltonian::build(kick_f.base.with_field(0.0), cap);
  const FullHamiltonian int_b = FullHamiltonian::build(kick_b.base.with_field(0.0), cap);
  const FullState psi0 = prepare_state(n, state);

  struct Direction {
    const FullHamiltonian* h;
    double tau;
    double field;
  };
  const auto kick = [n](const Direction& d, const FullState& psi) {
    FullState out = psi;
    for (Eigen::Index s = 0; s < out.size(); ++s) {
      out(s) *= std::exp(-kI * d.tau * field_energy(static_cast<std::uint32_t>(s), n, d.field));
    }
    return d.h->evolve(out, d.tau);
  };
  const Direction df{&int_f, kick_f.tau, kick_f.h_kick};
  const Direction db{&int_b, kick_b.tau, kick_b.h_kick};

  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_max + 1));
  FullState pf = psi0;
  FullState pb = psi0;
  out.push_back(std::norm(pb.dot(pf)));
  for (long long i = 1; i <= n_max; ++i) {
    pf = kick(df, pf);
    pb = kick(db, pb);
    out.push_back(std::norm(pb.dot(pf)));
  }
  return out;
}

double oracle_kicked(const KickSpec& kick_f, const KickSpec& kick_b, const InitialState& state,
                     long long n, int cap) {
  return oracle_kicked_series(kick_f, kick_b, state, n, cap).back();
}

double spin_vacuum_loschmidt(const ChainSpec& spec_f, const ChainSpec& spec_b, double t, int cap) {
  const auto even_block = [cap](const ChainSpec& spec) {
    check_chain(spec, cap);
    const int n = spec.n_sites;
    const auto states = sector_states(n, 1);
    const auto idx = index_map(n, states);
    const auto dim = static_cast<Eigen::Index>(states.size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
      const std::uint32_t s0 = states[static_cast<std::size_t>(col)];
      h(col, col) += field_energy(s0, n, spec.h);
      for (int j = 1; j <= n; ++j) {
        const int a = j;
        const int b = (j == n) ? 1 : j + 1;
        const std::uint32_t flipped = s0 ^ (1u << (a - 1)) ^ (1u << (b - 1));
        if (j % 2 == 1) {
          h(idx[flipped], col) += spec.j_x;
        } else {
          const bool same = occupation(s0, a) == occupation(s0, b);
          h(idx[flipped], col) += same ? -spec.j_y() : spec.j_y();
        }
      }
    }
    ParitySector s;
    s.states = states;
    diagonalize(h, s.vectors, s.energies);
    return s;
  };
  const ParitySector f = even_block(spec_f);
  const ParitySector b = even_block(spec_b);
  Eigen::VectorXcd x0 = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(f.states.size()));
  x0(0) = 1.0;  // all spins down
  const Eigen::VectorXcd yf = f.vectors * phased(f.energies, f.vectors.transpose() * x0, t);
  const Eigen::VectorXcd yb = b.vectors * phased(b.energies, b.vectors.transpose() * x0, t);
  return std::norm(yb.dot(yf));
}

}  // namespace kitaev
