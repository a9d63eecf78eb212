// Acceptance report: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "kitaev/echo.hpp"
#include "kitaev/ed_oracle.hpp"
#include "kitaev/floquet.hpp"
#include "kitaev/parallel.hpp"

using namespace kitaev;

namespace {

constexpr double kOracleTol = 1e-9;
constexpr double kOracleSeconds = 120.0;
constexpr double kUnitTol = 1e-12;
constexpr double kSameFieldTol = 1e-10;
constexpr double kSubsetTol = 1e-9;
constexpr double kSelectionTol = 1e-10;
constexpr double kDiagonalTol = 1e-12;
constexpr double kSymmetryTol = 1e-10;
constexpr double kPeakTol = 1e-8;
constexpr double kExponentLo = -1.35;
constexpr double kExponentHi = -1.15;
constexpr double kScalingSeconds = 60.0;
constexpr double kFreezeTol = 1e-10;
constexpr double kTrotterTol = 5e-3;
constexpr double kRevivalFloor = 0.4;
constexpr double kLateCeiling = 0.15;
constexpr double kMergeGap = 1e-3;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

ChainSpec chain(int n, double r, double h) { return ChainSpec{n, 1.0, r, h}; }

std::vector<double> grid(double t_max, double dt) { return TimeGrid{t_max, dt}.points(); }

std::vector<InitialState> all_states(int n) {
  std::vector<InitialState> states{VacuumState{}, UniformSiteState{}};
  for (double q : allowed_momenta(n)) states.emplace_back(DefiniteMomentumState{q});
  return states;
}

Outcome oracle_equivalence(int workers) {
  const auto start = Clock::now();
  const auto ts = grid(5.0, 0.1);
  double worst_l = 0.0;
  double worst_p = 0.0;
  for (int n : {8, 12}) {
    const auto ks = allowed_momenta(n);
    for (double r : {0.5, 1.0}) {
      const OracleQuench oracle(chain(n, r, 1.0), chain(n, r, -1.0));
      const Quench quench(chain(n, r, 1.0), chain(n, r, -1.0));
      for (const auto& state : all_states(n)) {
        const auto samples = oracle.evaluate(state, ts);
        std::vector<double> dl(ts.size(), 0.0);
        std::vector<double> dp(ts.size(), 0.0);
        parallel_for(ts.size(), workers, [&](std::size_t i) {
          const auto amps = quench.amplitudes(ts[i]);
          dl[i] = std::abs(assemble_loschmidt(amps, n, state) - samples[i].loschmidt);
          if (std::holds_alternative<VacuumState>(state)) return;
          for (std::size_t j = 0; j < ks.size(); ++j) {
            const double p = assemble_momentum_dist(amps, n, state, locate_momentum(n, ks[j]));
            dp[i] = std::max(dp[i], std::abs(p - samples[i].momentum_dist[j]));
          }
        });
        worst_l = std::max(worst_l, *std::max_element(dl.begin(), dl.end()));
        worst_p = std::max(worst_p, *std::max_element(dp.begin(), dp.end()));
      }
    }
  }
  const double elapsed = seconds_since(start);
  return {worst_l <= kOracleTol && worst_p <= kOracleTol && elapsed < kOracleSeconds,
          "max|dL|=" + fmt("%.3g", worst_l) + " max|dP|=" + fmt("%.3g", worst_p) + " tol=" + fmt("%.0e", kOracleTol) +
              " runtime=" + fmt("%.1f", elapsed) + "s (limit " + fmt("%.0f", kOracleSeconds) + "s)"};
}

Outcome trivial_identities() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ur(-1.5, 2.5);
  std::uniform_real_distribution<double> ut(0.0, 100.0);
  std::uniform_int_distribution<int> un(2, 25);
  double worst0 = 0.0;
  double worst_same = 0.0;
  for (int draw = 0; draw < 50; ++draw) {
    const int n = 4 * un(rng);
    const ChainSpec f = chain(n, ur(rng), ur(rng));
    const ChainSpec b = f.with_field(ur(rng));
    const Quench quench(f, b);
    const Quench same(f, f);
    const double t = ut(rng);
    const double q = allowed_momenta(n)[static_cast<std::size_t>(draw) % static_cast<std::size_t>(n)];
    for (const InitialState& s : {InitialState{VacuumState{}}, InitialState{DefiniteMomentumState{q}},
                                  InitialState{UniformSiteState{}}}) {
      worst0 = std::max(worst0, std::abs(quench.loschmidt(s, 0.0) - 1.0));
      worst_same = std::max(worst_same, std::abs(same.loschmidt(s, t) - 1.0));
    }
  }
  return {worst0 <= kUnitTol && worst_same <= kSameFieldTol,
          "max|L(0)-1|=" + fmt("%.3g", worst0) + " (tol " + fmt("%.0e", kUnitTol) + "), max|L(h_f=h_b)-1|=" +
              fmt("%.3g", worst_same) + " (tol " + fmt("%.0e", kSameFieldTol) + "), 50 draws"};
}

double subset_spread(const Real16& eig, const std::array<double, 4>& l) {
  std::vector<double> sums;
  for (int mask = 0; mask < 16; ++mask) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
      if (mask & (1 << i)) s += l[i];
    }
    sums.push_back(s);
  }
  std::vector<double> e(eig.data(), eig.data() + 16);
  std::sort(sums.begin(), sums.end());
  std::sort(e.begin(), e.end());
  double spread = 0.0;
  for (int i = 0; i < 16; ++i) spread = std::max(spread, std::abs(e[i] - e[0] - (sums[i] - sums[0])));
  return spread;
}

Outcome spectrum_property() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> ur(-2.0, 3.0);
  std::uniform_real_distribution<double> uq(0.01, kPi / 2 - 0.01);
  double worst = 0.0;
  for (int draw = 0; draw < 100; ++draw) {
    const ChainSpec spec = chain(8, ur(rng), ur(rng));
    const double q = uq(rng);
    const ModeQuartet quartet{1, q, {q - kPi, -q, q, kPi - q}};
    worst = std::max(worst, subset_spread(build_mode_hamiltonian(spec, quartet).eigenvalues(),
                                          mode_spectrum(spec, quartet).lambdas));
  }
  double worst_full = 0.0;
  for (const ChainSpec& spec : {chain(8, 1.0, 1.0), chain(8, 0.5, 0.7)}) {
    std::vector<double> levels{0.0};
    for (const auto& quartet : momentum_grid(8)) {
      const auto h = build_mode_hamiltonian(spec, quartet);
      std::vector<double> next;
      for (double a : levels) {
        for (int i = 0; i < 16; ++i) next.push_back(a + 2.0 * h.eigenvalues()(i));
      }
      levels = next;
    }
    std::sort(levels.begin(), levels.end());
    const Eigen::VectorXd e = build_full_hamiltonian(spec).spectrum();
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      worst_full = std::max(worst_full, std::abs((e(ii) - e(0)) - (levels[i] - levels[0])));
    }
  }
  return {worst <= kSubsetTol && worst_full <= kSubsetTol,
          "quartet subset sums max dev=" + fmt("%.3g", worst) + " (100 draws), full N=8 spectrum max dev=" +
              fmt("%.3g", worst_full) + " tol=" + fmt("%.0e", kSubsetTol)};
}

Outcome selection_rule(int workers) {
  const Quench quench(chain(32, 1.0, 1.0), chain(32, 1.0, -1.0));
  const auto ts = grid(10.0, 0.01);
  const auto ks = allowed_momenta(32);
  double worst_off = 0.0;
  double worst_diag = 0.0;
  for (double q : {kPi / 32, 15 * kPi / 32}) {
    const DefiniteMomentumState s{q};
    std::vector<double> off(ts.size(), 0.0);
    std::vector<double> diag(ts.size(), 0.0);
    parallel_for(ts.size(), workers, [&](std::size_t i) {
      const auto profile = quench.momentum_profile(s, ts[i]);
      for (std::size_t j = 0; j < ks.size(); ++j) {
        if (std::abs(ks[j] - q) < 1e-12) {
          diag[i] = std::abs(profile[j] - quench.loschmidt(s, ts[i]));
        } else {
          off[i] = std::max(off[i], profile[j]);
        }
      }
    });
    worst_off = std::max(worst_off, *std::max_element(off.begin(), off.end()));
    worst_diag = std::max(worst_diag, *std::max_element(diag.begin(), diag.end()));
  }
  return {worst_off <= kSelectionTol && worst_diag <= kDiagonalTol,
          "max P_q(k!=q)=" + fmt("%.3g", worst_off) + " (tol " + fmt("%.0e", kSelectionTol) + "), max|P_q(q)-L|=" +
              fmt("%.3g", worst_diag) + " (tol " + fmt("%.0e", kDiagonalTol) + ")"};
}

Outcome momentum_sign_symmetry(int workers) {
  const Quench quench(chain(32, 1.0, 1.0), chain(32, 1.0, -1.0));
  const auto ts = grid(10.0, 0.01);
  double worst = 0.0;
  for (const auto& quartet : quench.quartets()) {
    const auto plus = quench.echo_series(DefiniteMomentumState{quartet.q}, ts, workers);
    const auto minus = quench.echo_series(DefiniteMomentumState{-quartet.q}, ts, workers);
    for (std::size_t i = 0; i < ts.size(); ++i) worst = std::max(worst, std::abs(plus.values[i] - minus.values[i]));
  }
  return {worst <= kSymmetryTol, "max|L_q-L_-q|=" + fmt("%.3g", worst) + " over all 8 quartets, t in 0:0.01:10, tol=" +
                                     fmt("%.0e", kSymmetryTol)};
}

Outcome four_peaks() {
  const int n = 100;
  const Quench quench(chain(n, 1.0, 1.0), chain(n, 1.0, -1.0));
  const auto ks = allowed_momenta(n);
  const auto profile = quench.momentum_profile(UniformSiteState{}, 1.2);
  std::vector<std::size_t> order(ks.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return profile[a] > profile[b]; });
  const MomentumSlot top = locate_momentum(n, ks[order[0]]);
  const auto& quartet = quench.quartets()[static_cast<std::size_t>(top.quartet)];
  double spread = 0.0;
  double lowest_partner = 1.0;
  for (double k : quartet.partners) {
    const double p = quench.momentum_dist(UniformSiteState{}, k, 1.2);
    spread = std::max(spread, std::abs(p - profile[order[0]]));
    lowest_partner = std::min(lowest_partner, p);
  }
  bool top_four_same = true;
  for (std::size_t i = 0; i < 4; ++i) top_four_same = top_four_same && locate_momentum(n, ks[order[i]]).quartet == top.quartet;
  const double rest = profile[order[4]];
  return {spread <= kPeakTol && top_four_same && lowest_partner > rest,
          "peak quartet q=" + fmt("%.6f", quartet.q) + " P=" + fmt("%.6g", profile[order[0]]) + " spread=" +
              fmt("%.3g", spread) + " (tol " + fmt("%.0e", kPeakTol) + "), next value " + fmt("%.6g", rest)};
}

Outcome power_law(int workers, PowerLawFit& fit_out) {
  const auto start = Clock::now();
  const std::vector<int> sizes{32, 64, 96, 128, 192, 256};
  fit_out = peak_scaling_fit(chain(32, 1.0, 1.0), chain(32, 1.0, -1.0), sizes, 1.2, workers);
  const double elapsed = seconds_since(start);
  const double e = fit_out.exponent;
  std::string peaks;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    peaks += (i ? ", " : "") + std::to_string(sizes[i]) + ":" + fmt("%.5g", fit_out.peaks[i]);
  }
  return {e >= kExponentLo && e <= kExponentHi && elapsed < kScalingSeconds,
          "fit " + fmt("%.6g", fit_out.amplitude) + "*N^" + fmt("%.6g", e) + ", band [" + fmt("%.2f", kExponentLo) +
              ", " + fmt("%.2f", kExponentHi) + "], runtime=" + fmt("%.2f", elapsed) + "s; P_max {" + peaks + "}"};
}

Outcome special_kick(int workers) {
  double worst = 0.0;
  for (int n : {16, 64, 128}) {
    const KickSpec kf{chain(n, 1.0, 0.0), kPi / 4, 1.0};
    const KickSpec kb{chain(n, 1.0, 0.0), kPi / 4, -1.0};
    const KickedQuench quench(kf, kb);
    for (const InitialState& s : {InitialState{VacuumState{}}, InitialState{UniformSiteState{}},
                                  InitialState{DefiniteMomentumState{kPi / n}}}) {
      const auto series = quench.echo_series(s, 10000, workers);
      for (double v : series.values) worst = std::max(worst, std::abs(v - 1.0));
    }
  }
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ur(-1.5, 2.5);
  std::uniform_real_distribution<double> ut(0.05, 3.0);
  double worst_first = 0.0;
  for (int draw = 0; draw < 30; ++draw) {
    const double r = ur(rng);
    const double tau = ut(rng);
    const KickSpec kf{chain(32, r, 0.0), tau, ur(rng)};
    const KickSpec kb{chain(32, r, 0.0), tau, ur(rng)};
    const KickedQuench quench(kf, kb);
    for (const InitialState& s : {InitialState{VacuumState{}}, InitialState{UniformSiteState{}},
                                  InitialState{DefiniteMomentumState{-7 * kPi / 32}}}) {
      worst_first = std::max(worst_first, std::abs(quench.loschmidt(s, 1) - 1.0));
    }
  }
  return {worst <= kFreezeTol && worst_first <= kFreezeTol,
          "tau=pi/4: max|L(n)-1|=" + fmt("%.3g", worst) + " for n<=10^4, N in {16,64,128}; first kick max|L-1|=" +
              fmt("%.3g", worst_first) + " (30 draws); tol=" + fmt("%.0e", kFreezeTol)};
}

Outcome trotter_limit() {
  const KickSpec kf{chain(32, 1.0, 0.0), 1e-3, 1.0};
  const KickSpec kb{chain(32, 1.0, 0.0), 1e-3, -1.0};
  const double kicked = KickedQuench(kf, kb).loschmidt(VacuumState{}, 1000);
  const double direct = Quench(kf.averaged(), kb.averaged()).loschmidt(VacuumState{}, 1.0);
  return {std::abs(kicked - direct) <= kTrotterTol, "L_kicked=" + fmt("%.8f", kicked) + " L_direct=" +
                                                        fmt("%.8f", direct) + " diff=" +
                                                        fmt("%.3g", std::abs(kicked - direct)) + " tol=" +
                                                        fmt("%.0e", kTrotterTol)};
}

double series_max(const Quench& quench, const InitialState& s, double after, double t_max, int workers) {
  std::vector<double> ts;
  for (double t : grid(t_max, 0.01)) {
    if (t > after) ts.push_back(t);
  }
  const auto series = quench.echo_series(s, ts, workers);
  return *std::max_element(series.values.begin(), series.values.end());
}

double averaged(const Quench& quench, const InitialState& s, int workers) {
  const auto ts = grid(default_average_horizon(quench.n_sites()), 0.01);
  return time_average(quench.echo_series(s, ts, workers));
}

Outcome figure_properties(int workers, std::string& info) {
  const Quench small(chain(32, 1.0, 1.0), chain(32, 1.0, -1.0));
  const Quench large(chain(100, 1.0, 1.0), chain(100, 1.0, -1.0));
  const double revival = series_max(small, VacuumState{}, 10.0, 500.0, workers);
  const double late = series_max(large, VacuumState{}, 5.0, 500.0, workers);
  const bool a = revival >= kRevivalFloor;
  const bool b = late <= kLateCeiling;

  const auto gap_at = [&](int n, double q) {
    const Quench quench(chain(n, 1.0, 1.0), chain(n, 1.0, -1.0));
    return averaged(quench, DefiniteMomentumState{q}, workers) - averaged(quench, VacuumState{}, workers);
  };
  const double gap16 = gap_at(16, momentum_grid(16).back().q);
  bool c = gap16 >= 0.0;
  std::string merged;
  for (int n : {40, 44, 48, 64, 100}) {
    const double g = gap_at(n, momentum_grid(n).back().q);
    c = c && std::abs(g) <= kMergeGap;
    merged += " N=" + std::to_string(n) + ":" + fmt("%.3g", g);
  }
  info = "q=pi/N gaps: N=16:" + fmt("%.3g", gap_at(16, kPi / 16)) + " N=40:" + fmt("%.3g", gap_at(40, kPi / 40));
  return {a && b && c, std::string("(a) N=32 max L(10<t<=500)=") + fmt("%.4f", revival) + (a ? " ok" : " FAIL") +
                           " (>= " + fmt("%.2f", kRevivalFloor) + "); (b) N=100 max L(5<t<=500)=" + fmt("%.4f", late) +
                           (b ? " ok" : " FAIL") + " (<= " + fmt("%.2f", kLateCeiling) +
                           "); (c) last-mode magnon minus vacuum average: N=16:" + fmt("%.4g", gap16) + merged +
                           (c ? " ok" : " FAIL") + " (N>=40 |gap| <= " + fmt("%.0e", kMergeGap) + ")"};
}

}  // namespace

int main() {
  const int workers = default_workers();
  int failures = 0;
  const auto report = [&](int id, const char* name, const Outcome& o) {
    std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };
  report(1, "oracle equivalence", oracle_equivalence(workers));
  report(2, "trivial identities", trivial_identities());
  report(3, "spectrum property", spectrum_property());
  report(4, "selection rule", selection_rule(workers));
  report(5, "q <-> -q symmetry", momentum_sign_symmetry(workers));
  report(6, "four-peak structure", four_peaks());
  PowerLawFit fit;
  report(7, "power-law scaling", power_law(workers, fit));
  {
    const std::vector<int> sizes{16, 32, 48, 64, 80, 96};
    const auto alt = peak_scaling_fit(chain(16, 1.0, 1.0), chain(16, 1.0, -1.0), sizes, 1.2, workers);
    std::printf("       info: sizes 16..96 step 16 give exponent %.4f\n", alt.exponent);
  }
  report(8, "special-kick freeze", special_kick(workers));
  report(9, "Trotter limit", trotter_limit());
  std::string info;
  report(10, "qualitative figures", figure_properties(workers, info));
  std::printf("       info: %s\n", info.c_str());
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
