#include "intricacy/evolution.hpp"

#include <cmath>
#include <sstream>

#include "intricacy/errors.hpp"

namespace intricacy {

std::vector<Snapshot> evolve(IndexedWaveFunction state, const ExtendedHamiltonian& hamiltonian,
                             const EvolveOptions& options) {
  if (!(state.layout() == hamiltonian.layout())) throw std::invalid_argument("state dimension mismatch");
  if (!(options.dt > 0)) throw ConfigError("dt must be positive");
  const double limit = stable_time_step(hamiltonian);
  if (options.dt > limit) {
    std::ostringstream msg;
    msg << "dt = " << options.dt << " exceeds the RK4 stability bound " << limit;
    throw ConfigError(msg.str());
  }

  const auto steps = static_cast<long>(std::ceil(options.t_end / options.dt - 1e-9));
  const double dt = steps > 0 ? options.t_end / static_cast<double>(steps) : 0.0;
  long snapshot_every = steps > 0 ? steps : 1;
  if (options.snapshot_interval > 0)
    snapshot_every = std::max(1L, std::lround(options.snapshot_interval / (dt > 0 ? dt : 1.0)));

  const StateLayout& layout = state.layout();
  const double norm0 = physical_norm(layout, project_physical(state));
  auto check_norm = [&](double t) {
    const double norm = physical_norm(layout, project_physical(state));
    if (!std::isfinite(norm) || std::abs(norm - norm0) > options.norm_tolerance) {
      std::ostringstream msg;
      msg << "physical norm drifted from " << norm0 << " to " << norm << " at t = " << t
          << " (dt = " << dt << ")";
      throw NumericAbort(msg.str());
    }
  };

  std::vector<Snapshot> out;
  out.push_back({0.0, state});

  const Complex minus_i(0.0, -1.0);
  Eigen::VectorXcd& psi = state.data();
  Eigen::VectorXcd k1, k2, k3, k4, tmp;
  for (long step = 1; step <= steps; ++step) {
    hamiltonian.apply(psi, k1);
    k1 *= minus_i;
    tmp = psi + (0.5 * dt) * k1;
    hamiltonian.apply(tmp, k2);
    k2 *= minus_i;
    tmp = psi + (0.5 * dt) * k2;
    hamiltonian.apply(tmp, k3);
    k3 *= minus_i;
    tmp = psi + dt * k3;
    hamiltonian.apply(tmp, k4);
    k4 *= minus_i;
    psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double t = step * dt;
    const bool snap = step % snapshot_every == 0 || step == steps;
    if (snap || step % 16 == 0) check_norm(t);
    if (snap) out.push_back({t, state});
  }
  return out;
}

}  // namespace intricacy
