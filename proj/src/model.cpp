#include "kitaev/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kitaev {

namespace {
constexpr double kDegenerateTol = 1e-14;
constexpr double kMomentumTol = 1e-9;
}  // namespace

void ChainSpec::validate() const {
  if (n_sites < 8 || n_sites % 4 != 0) {
    throw std::invalid_argument("chain length must be a multiple of 4 and at least 8, got " +
                                std::to_string(n_sites));
  }
  if (j_x == 0.0 || !std::isfinite(j_x)) {
    throw std::invalid_argument("j_x must be finite and nonzero");
  }
  if (!std::isfinite(r) || !std::isfinite(h)) {
    throw std::invalid_argument("r and h must be finite");
  }
}

std::string slot_name(Slot s) {
  switch (s) {
    case Slot::q_minus_pi: return "q-pi";
    case Slot::minus_q: return "-q";
    case Slot::q: return "q";
    case Slot::pi_minus_q: return "pi-q";
  }
  return "?";
}

std::vector<ModeQuartet> momentum_grid(int n_sites) {
  if (n_sites < 8 || n_sites % 4 != 0) {
    throw std::invalid_argument("momentum grid needs N divisible by 4 and N >= 8, got N=" +
                                std::to_string(n_sites));
  }
  std::vector<ModeQuartet> grid;
  grid.reserve(static_cast<std::size_t>(n_sites / 4));
  for (int m = 1; m <= n_sites / 4; ++m) {
    const double q = (2.0 * m - 1.0) * kPi / n_sites;
    grid.push_back(ModeQuartet{m, q, {q - kPi, -q, q, kPi - q}});
  }
  return grid;
}

std::vector<double> allowed_momenta(int n_sites) {
  std::vector<double> ks;
  for (const auto& quartet : momentum_grid(n_sites)) {
    ks.insert(ks.end(), quartet.partners.begin(), quartet.partners.end());
  }
  std::sort(ks.begin(), ks.end());
  return ks;
}

double reduce_momentum(double k) {
  double x = std::remainder(k, 2.0 * kPi);  // [-pi, pi]
  if (x <= -kPi) x += 2.0 * kPi;
  return x;
}

MomentumSlot locate_momentum(int n_sites, double k) {
  if (n_sites < 8 || n_sites % 4 != 0) {
    throw std::invalid_argument("invalid chain length " + std::to_string(n_sites));
  }
  const double kr = reduce_momentum(k);
  const double a = std::abs(kr);
  const double q = (a <= kPi / 2) ? a : kPi - a;
  // q must be an odd multiple of pi/N strictly inside (0, pi/2)
  const double x = q * n_sites / kPi;
  const double odd = std::round((x - 1.0) / 2.0) * 2.0 + 1.0;
  if (std::abs(x - odd) > kMomentumTol * n_sites || odd < 1.0 || odd > n_sites / 2.0 - 1.0) {
    throw std::invalid_argument("momentum " + std::to_string(k) +
                                " is not an allowed momentum of an N=" + std::to_string(n_sites) +
                                " chain (odd multiples of pi/N)");
  }
  MomentumSlot ms;
  ms.quartet = static_cast<int>(odd + 1.0) / 2 - 1;
  if (kr > 0) {
    ms.slot = (a <= kPi / 2) ? Slot::q : Slot::pi_minus_q;
  } else {
    ms.slot = (a <= kPi / 2) ? Slot::minus_q : Slot::q_minus_pi;
  }
  return ms;
}

double momentum_of(int n_sites, MomentumSlot ms) {
  const double q = (2.0 * (ms.quartet + 1) - 1.0) * kPi / n_sites;
  switch (ms.slot) {
    case Slot::q_minus_pi: return q - kPi;
    case Slot::minus_q: return -q;
    case Slot::q: return q;
    case Slot::pi_minus_q: return kPi - q;
  }
  return q;
}

double mode_energy_scale(const ChainSpec& spec, double q) {
  const double sum = (spec.j_x + spec.j_y()) * std::cos(q);
  const double diff = (spec.j_x - spec.j_y()) * std::sin(q);
  return 0.5 * std::sqrt(sum * sum + diff * diff);
}

double mode_angle(double r, double q) {
  const double num = (1.0 - r) * std::sin(q);
  const double den = std::hypot((1.0 + r) * std::cos(q), num);
  if (den == 0.0) return 0.0;
  return std::asin(std::clamp(num / den, -1.0, 1.0));
}

ModeSpectrum mode_spectrum(const ChainSpec& spec, const ModeQuartet& quartet) {
  spec.validate();
  ModeSpectrum out;
  out.abs_e = mode_energy_scale(spec, quartet.q);
  out.theta_q = mode_angle(spec.r, quartet.q);
  const double root = std::sqrt(out.abs_e * out.abs_e + spec.h * spec.h);
  // -|e|-root <= |e|-root <= -|e|+root <= |e|+root
  out.lambdas = {-out.abs_e - root, out.abs_e - root, -out.abs_e + root, out.abs_e + root};
  const double scale = std::max({1.0, out.abs_e, std::abs(spec.h)});
  for (int i = 0; i < 4; ++i) {
    if (std::abs(out.lambdas[i]) <= kDegenerateTol * scale) {
      out.degenerate = true;
      out.h_over_lambda[i] = 0.0;
    } else {
      out.h_over_lambda[i] = spec.h / out.lambdas[i];
    }
  }
  return out;
}

}  // namespace kitaev
