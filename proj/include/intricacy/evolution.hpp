#pragma once

#include <vector>

#include "intricacy/extended_hamiltonian.hpp"
#include "intricacy/indexed_state.hpp"

namespace intricacy {

/// RK4 is stable on the imaginary axis for |dt * lambda| <= 2 sqrt(2).
constexpr double kRk4ImaginaryStability = 2.8;

struct EvolveOptions {
  double dt = 1e-3;
  double t_end = 1.0;
  /// Snapshot spacing; <= 0 keeps only the initial and final states.
  double snapshot_interval = 0.1;
  /// Abort when the physical norm drifts by more than this from its start.
  double norm_tolerance = 1e-6;
};

struct Snapshot {
  double t = 0.0;
  IndexedWaveFunction state;
};

/// Largest admissible time step for the given H'.
inline double stable_time_step(const ExtendedHamiltonian& h) {
  return kRk4ImaginaryStability / h.spectral_bound();
}

/// Integrates d psi/dt = -i H' psi with classical fourth-order Runge-Kutta.
/// The step is shrunk slightly so that t_end is hit exactly. Throws
/// ConfigError for dt above the stability limit and NumericAbort on norm drift.
std::vector<Snapshot> evolve(IndexedWaveFunction state, const ExtendedHamiltonian& hamiltonian,
                             const EvolveOptions& options);

}  // namespace intricacy
