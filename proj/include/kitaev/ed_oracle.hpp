// Brute-force reference in the full 2^N fermion Fock space.
//
// Site j (1-based) is basis bit j-1; Jordan-Wigner strings run over lower sites. The
// Hamiltonian is
//   H = sum_j t_j (c_j^+ c_{j+1} + h.c.) + p_j (c_j^+ c_{j+1}^+ + h.c.) + h sum_j (2 n_j - 1)
// with t_j = p_j = j_x on odd bonds, t_j = -p_j = j_y on even bonds and c_{N+1} = -c_1.
// States evolve with exp(-iHt).
#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "kitaev/echo.hpp"
#include "kitaev/floquet.hpp"
#include "kitaev/model.hpp"

namespace kitaev {

inline constexpr int kDefaultOracleCap = 12;

using FullState = Eigen::VectorXcd;
using SparseOp = Eigen::SparseMatrix<Complex>;

/// Real symmetric block of H on one fermion-parity sector (+1 even, -1 odd), rows in
/// ascending basis-state order. Throws std::invalid_argument beyond the cap.
Eigen::MatrixXd sector_matrix(const ChainSpec& spec, int parity, int cap = kDefaultOracleCap);

/// Basis states of one parity sector, ascending.
std::vector<std::uint32_t> sector_states(int n_sites, int parity);

struct ParitySector {
  int parity = 1;
  std::vector<std::uint32_t> states;
  Eigen::VectorXd energies;  // ascending
  Eigen::MatrixXd vectors;   // columns are eigenvectors
};

/// Full Hamiltonian diagonalised sector by sector.
class FullHamiltonian {
 public:
  /// Requires 2 <= n_sites <= cap; n_sites need not be a multiple of 4.
  static FullHamiltonian build(const ChainSpec& spec, int cap = kDefaultOracleCap);

  const ChainSpec& spec() const { return spec_; }
  int n_sites() const { return spec_.n_sites; }
  std::size_t dimension() const { return std::size_t{1} << spec_.n_sites; }
  const ParitySector& sector(int parity) const { return parity > 0 ? even_ : odd_; }

  /// All 2^N eigenvalues, ascending.
  Eigen::VectorXd spectrum() const;
  /// exp(-iHt) |psi>
  FullState evolve(const FullState& psi, double t) const;

 private:
  ChainSpec spec_;
  ParitySector even_;
  ParitySector odd_;
};

FullHamiltonian build_full_hamiltonian(const ChainSpec& spec, int cap = kDefaultOracleCap);

/// Odd multiples of pi/N in (-pi, pi], ascending.
std::vector<double> oracle_momenta(int n_sites);

SparseOp site_annihilator(int n_sites, int site);
/// c_k = N^{-1/2} sum_j e^{-ikj} c_j
SparseOp momentum_annihilator(int n_sites, double k);
/// c_k^+ = N^{-1/2} sum_j e^{ikj} c_j^+
SparseOp momentum_creation(int n_sites, double k);

FullState vacuum_state(int n_sites);
/// |0>, c_q^+|0> or c_1^+|0>.
FullState prepare_state(int n_sites, const InitialState& state);

struct OracleSample {
  double loschmidt = 0.0;
  std::vector<double> momentum_dist;  // over oracle_momenta, ascending
};

/// Evaluates L = |<psi|e^{iH_b t} e^{-iH_f t}|psi>|^2 and
/// P(k) = |<0|c_k e^{iH_b t} e^{-iH_f t}|psi>|^2 from both full eigendecompositions.
class OracleQuench {
 public:
  OracleQuench(const ChainSpec& forward, const ChainSpec& backward, int cap = kDefaultOracleCap);

  const FullHamiltonian& forward() const { return forward_; }
  const FullHamiltonian& backward() const { return backward_; }

  std::vector<OracleSample> evaluate(const InitialState& state, std::span<const double> times) const;

 private:
  FullHamiltonian forward_;
  FullHamiltonian backward_;
};

double oracle_loschmidt(const ChainSpec& spec_f, const ChainSpec& spec_b, const InitialState& state,
                        double t, int cap = kDefaultOracleCap);
double oracle_momentum_dist(const ChainSpec& spec_f, const ChainSpec& spec_b,
                            const InitialState& state, double k, double t,
                            int cap = kDefaultOracleCap);

/// The same P written with Heisenberg operators,
///   |<0|U_b^+ (U_b c_k U_b^+)(U_f a^+ U_f^+) U_f|0>|^2,
/// a^+ being c_q^+ or c_1^+. Throws std::invalid_argument for the vacuum state.
double oracle_momentum_dist_heisenberg(const ChainSpec& spec_f, const ChainSpec& spec_b,
                                       const InitialState& state, double k, double t,
                                       int cap = kDefaultOracleCap);

/// L after each kick count 0..n_max, applying exp(-i tau H_int) exp(-i tau H_z) directly.
std::vector<double> oracle_kicked_series(const KickSpec& kick_f, const KickSpec& kick_b,
                                         const InitialState& state, long long n_max,
                                         int cap = kDefaultOracleCap);
double oracle_kicked(const KickSpec& kick_f, const KickSpec& kick_b, const InitialState& state,
                     long long n, int cap = kDefaultOracleCap);

/// Vacuum echo from the spin Hamiltonian with periodic spin boundary, restricted to the
/// even sector. Diagnostic only.
double spin_vacuum_loschmidt(const ChainSpec& spec_f, const ChainSpec& spec_b, double t,
                             int cap = kDefaultOracleCap);

}  // namespace kitaev
