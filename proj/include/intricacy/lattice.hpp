// Discretization and physical parameters for indexed evolution.
// Units: hbar = 1, atom mass = 1. Each atom has one coordinate on a
// hard-wall box [0, L] sampled at G interior nodes x_i = (i + 1) h,
// h = L / (G + 1).
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace intricacy {

struct GaussianPacket {
  double center = 0.0;
  double width = 1.0;
  double momentum = 0.0;

  std::complex<double> operator()(double x) const {
    const double u = (x - center) / width;
    return std::exp(-0.5 * u * u) * std::polar(1.0, momentum * x);
  }
};

struct LatticeConfig {
  /// Upper bound on labels * strings * grid^N * m_points (complex entries).
  static constexpr std::int64_t kMaxStateEntries = std::int64_t{1} << 24;

  int n_atoms = 2;
  int channels = 1;
  int grid_points = 16;
  double box_length = 10.0;
  double dt = 1e-3;
  double t_end = 1.0;
  /// One packet per atom; empty means evenly spaced packets built from
  /// packet_width / packet_momentum, moving toward each other.
  std::vector<GaussianPacket> packets;
  double packet_width = 0.8;
  double packet_momentum = 2.0;
  /// Intricacy string carrying the initial state; empty means all zeros.
  std::vector<int> initial_string;

  double spacing() const { return box_length / (grid_points + 1); }
  double node(int i) const { return (i + 1) * spacing(); }
  std::vector<GaussianPacket> resolved_packets() const;
  void validate() const;
};

/// V(x, x') = V0 exp(-(x - x')^2 / b^2), zero for |x - x'| > 4b.
struct PairPotential {
  double strength = 2.0;
  double range = 1.0;

  double operator()(double x, double xp) const {
    const double r = x - xp;
    if (std::abs(r) > 4.0 * range) return 0.0;
    return strength * std::exp(-(r * r) / (range * range));
  }
};

/// Optional external particle M with an internal label selecting the channel
/// its coupling raises atoms into. The M coordinate shares the atoms' box.
struct MCoupling {
  bool present = false;
  double strength = 2.0;  // U0
  double range = 1.0;     // b'
  double mass = 1.0;
  int grid_points = 16;
  GaussianPacket packet{1.5, 0.7, 4.0};
  /// c_j for j = 1..k; must have unit norm.
  std::vector<std::complex<double>> channel_weights{1.0};

  /// U(y, x) with the same truncated Gaussian form as the pair potential.
  double potential(double y, double x) const { return PairPotential{strength, range}(y, x); }
  void validate(int channels) const;
};

}  // namespace intricacy
