// Static chain parameters, the momentum grid and the closed-form quartet spectrum.
#pragma once

#include <array>
#include <string>
#include <vector>

namespace kitaev {

inline constexpr double kPi = 3.14159265358979323846;

/// Parameters of one evolution direction of the chain
///   H = j_x sum_{odd i} sx_i sx_{i+1} + j_y sum_{even i} sy_i sy_{i+1} + h sum_i sz_i
/// with j_y = r * j_x. Energies are in units of j_x when j_x = 1.
struct ChainSpec {
  int n_sites = 8;
  double j_x = 1.0;
  double r = 1.0;
  double h = 0.0;

  double j_y() const { return r * j_x; }

  /// Throws std::invalid_argument unless n_sites >= 8, n_sites % 4 == 0 and j_x != 0.
  void validate() const;

  ChainSpec with_field(double field) const {
    ChainSpec out = *this;
    out.h = field;
    return out;
  }
};

/// Position of a momentum inside its quartet (q - pi, -q, q, pi - q).
enum class Slot : int { q_minus_pi = 0, minus_q = 1, q = 2, pi_minus_q = 3 };

inline constexpr std::array<Slot, 4> kAllSlots{Slot::q_minus_pi, Slot::minus_q, Slot::q,
                                               Slot::pi_minus_q};

constexpr int slot_index(Slot s) { return static_cast<int>(s); }
std::string slot_name(Slot s);

/// One of the N/4 independent momentum blocks.
struct ModeQuartet {
  int index_m = 1;  // 1-based
  double q = 0.0;   // (2 m - 1) pi / N
  std::array<double, 4> partners{};  // indexed by Slot

  double momentum(Slot s) const { return partners[slot_index(s)]; }
};

/// Quartets for a chain of n_sites, q_m = (2m - 1) pi / N for m = 1..N/4.
/// Throws std::invalid_argument when n_sites is not a multiple of 4 or below 8.
std::vector<ModeQuartet> momentum_grid(int n_sites);

/// All N allowed momenta (odd multiples of pi/N) reduced into (-pi, pi], ascending.
std::vector<double> allowed_momenta(int n_sites);

/// Reduces k into (-pi, pi].
double reduce_momentum(double k);

struct MomentumSlot {
  int quartet = 0;  // 0-based index into momentum_grid()
  Slot slot = Slot::q;

  friend bool operator==(const MomentumSlot&, const MomentumSlot&) = default;
};

/// Maps an allowed momentum onto its quartet and slot. Throws std::invalid_argument when
/// k is not within 1e-9 of an odd multiple of pi/N.
MomentumSlot locate_momentum(int n_sites, double k);

/// Momentum value carried by a (quartet, slot) pair.
double momentum_of(int n_sites, MomentumSlot ms);

struct ModeSpectrum {
  double abs_e = 0.0;
  double theta_q = 0.0;
  std::array<double, 4> lambdas{};        // ascending
  std::array<double, 4> h_over_lambda{};  // h / lambda_i, zero where lambda_i == 0
  bool degenerate = false;                // some lambda_i vanishes
};

/// Closed-form quartet energies lambda = +-|e| +- sqrt(|e|^2 + h^2).
ModeSpectrum mode_spectrum(const ChainSpec& spec, const ModeQuartet& quartet);

/// |e| = 1/2 sqrt(((j_x + j_y) cos q)^2 + ((j_x - j_y) sin q)^2)
double mode_energy_scale(const ChainSpec& spec, double q);

/// theta_q = arcsin((1 - r) sin q / sqrt(((1 + r) cos q)^2 + ((1 - r) sin q)^2))
double mode_angle(double r, double q);

}  // namespace kitaev
