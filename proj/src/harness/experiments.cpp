#include "intricacy/harness/experiments.hpp"

#include <cmath>
#include <limits>

#include "intricacy/errors.hpp"
#include "intricacy/harness/oracles.hpp"

namespace intricacy::harness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

IndexedRun run_indexed_experiment(const IndexedSection& section, std::int64_t oracle_limit) {
  IndexedRun run;
  run.layout = StateLayout::make(section.lattice, section.coupling);
  const auto& layout = run.layout;
  const ExtendedHamiltonian hamiltonian(layout, section.potential, section.coupling);
  const IndexedWaveFunction initial = init_state(section.lattice, section.coupling);

  EvolveOptions options;
  options.dt = section.lattice.dt;
  options.t_end = section.lattice.t_end;
  options.snapshot_interval = section.snapshot_interval;
  run.snapshots = evolve(initial, hamiltonian, options);

  const double norm0 = physical_norm(layout, project_physical(initial));
  for (const auto& snap : run.snapshots) {
    const double norm = physical_norm(layout, project_physical(snap.state));
    run.max_norm_drift = std::max(run.max_norm_drift, std::abs(norm - norm0));
    for (int atom = 0; atom < layout.n_atoms; ++atom) {
      for (int channel = 1; channel <= layout.channels; ++channel) {
        MeasureRow row{snap.t, atom, channel, intricacy_measures(snap.state, atom, channel), 0.0};
        row.identity_error = std::abs(row.m.p1 + row.m.p0 + row.m.interference - 1.0);
        run.max_identity_error = std::max(run.max_identity_error, row.identity_error);
        run.max_abs_interference = std::max(run.max_abs_interference, std::abs(row.m.interference));
        run.measures.push_back(row);
      }
    }
  }

  if (section.oracle && layout.size() <= oracle_limit) {
    const Eigen::MatrixXcd h_ext =
        oracle::extended_hamiltonian(layout, section.potential, section.coupling);
    const Eigen::VectorXcd exact = oracle::propagate(h_ext, initial.data(), options.t_end);
    run.oracle_error = (exact - run.snapshots.back().state.data()).cwiseAbs().maxCoeff();

    // A only collapses strings over {0, j}; without M that needs k = 1.
    if (layout.channels == 1 || layout.has_m) {
      const Eigen::MatrixXcd h_std =
          oracle::standard_hamiltonian(layout, section.potential, section.coupling);
      const Eigen::VectorXcd reference =
          oracle::propagate(h_std, project_physical(initial), options.t_end);
      const Eigen::VectorXcd projected =
          project_physical(apply_projection_A(run.snapshots.back().state));
      run.standard_error = physical_norm(layout, projected - reference);
    }
  }
  return run;
}

ConstrainedFrontRun run_constrained_front(const PdeSection& pde) {
  pde.validate();
  const auto grid = pde.geometry == kinetics::Geometry::planar
                        ? kinetics::FieldGrid::planar(pde.z_min, pde.z_max, pde.dx)
                        : kinetics::FieldGrid::radial(pde.z_max, pde.dx);
  kinetics::FrontConstraint constraint{pde.constraint_enabled, pde.constraint_speed, pde.source_z};
  ConstrainedFrontRun run;
  run.history = kinetics::solve_planar_source(grid, pde.source_z, pde.amplitude, pde.resolved_dt(),
                                              pde.t_end, constraint, pde.sample_interval);
  const bool planar = pde.geometry == kinetics::Geometry::planar;
  std::vector<double> fit_t, fit_z;
  for (const auto& s : run.history.snapshots) {
    const auto front = kinetics::threshold_front(run.history.z, s.f1, pde.threshold);
    run.t.push_back(s.t);
    run.left.push_back(front ? front->left : kNaN);
    run.right.push_back(front ? front->right : kNaN);
    if (s.t < pde.fit_start - 1e-9) continue;
    const double reach = pde.constraint_speed * s.t;
    double dev = front ? std::abs(front->right - (pde.source_z + reach))
                       : std::numeric_limits<double>::infinity();
    if (front && planar) dev = std::max(dev, std::abs(front->left - (pde.source_z - reach)));
    run.max_deviation = std::max(run.max_deviation, dev);
    if (front) {
      fit_t.push_back(s.t);
      fit_z.push_back(front->right);
    }
  }
  if (fit_t.size() >= 2) run.speed = kmc::fit_line(fit_t, fit_z).slope;
  try {
    run.level_speed = kinetics::front_speed(run.history, 0.5, 0.5 * pde.t_end, pde.t_end);
  } catch (const NumericAbort&) {
  }

  const auto& last = run.history.snapshots.back();
  const double lo = planar ? run.left.back() + 8.0 : -1.0, hi = run.right.back() - 8.0;
  run.interior_min = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < last.f1.size(); ++i)
    if (run.history.z[i] >= lo && run.history.z[i] <= hi)
      run.interior_min = std::min(run.interior_min, last.f1[i]);
  if (!std::isfinite(run.interior_min)) run.interior_min = kNaN;
  return run;
}

FreeFrontRun run_free_fronts(const PdeSection& pde) {
  pde.validate();
  FreeFrontRun run;
  const double z0 = 0.5 * pde.free_z_max;
  for (double h : pde.free_dx) {
    const auto grid = kinetics::FieldGrid::planar(0.0, pde.free_z_max, h);
    const auto history = kinetics::solve_planar_source(grid, z0, pde.amplitude, 1.5 * h * h,
                                                       pde.free_t_end, {}, 1.0);
    std::vector<double> t, right;
    for (const auto& s : history.snapshots) {
      const auto front = kinetics::threshold_front(history.z, s.f1, pde.free_threshold);
      t.push_back(s.t);
      right.push_back(front ? front->right : kNaN);
      if (front && front->right >= pde.free_z_max - h)
        throw NumericAbort("free front reached the domain edge; increase pde.free.z_max");
    }
    run.dx.push_back(h);
    run.speed.push_back(
        kinetics::front_speed(history, pde.free_threshold, 0.5 * pde.free_t_end, pde.free_t_end));
    run.t.push_back(std::move(t));
    run.right.push_back(std::move(right));
  }
  return run;
}

MultichannelRun run_uniform_multichannel(const PdeSection& pde) {
  pde.validate();
  auto grid = kinetics::FieldGrid::planar(0.0, 10.0 * pde.dx, pde.dx, true);
  grid.f1.setConstant(pde.multichannel_epsilon * pde.multichannel_p1);
  grid.f2.setConstant(pde.multichannel_epsilon * pde.multichannel_p2);
  MultichannelRun run;
  run.history = kinetics::solve_multichannel(grid, pde.resolved_dt(), pde.multichannel_t_end, {},
                                             pde.sample_interval);
  const bool ratio = pde.multichannel_p2 > 0;
  const double r0 = ratio ? pde.multichannel_p1 / pde.multichannel_p2 : 0.0;
  for (const auto& s : run.history.snapshots) {
    run.max_simplex_error =
        std::max(run.max_simplex_error, ((s.f0 + s.f1 + s.f2).array() - 1.0).abs().maxCoeff());
    if (ratio)
      run.max_ratio_drift =
          std::max(run.max_ratio_drift, ((s.f1.array() / s.f2.array()) - r0).abs().maxCoeff());
  }
  const auto& last = run.history.snapshots.back();
  run.final_f1 = last.f1.mean();
  run.final_f2 = last.f2.mean();
  return run;
}

KmcRun run_kmc_experiment(const KmcSection& section) {
  if (!(section.t_end > 0) || !(section.sample_interval > 0))
    throw ConfigError("kmc.t_end and kmc.sample_interval must be positive");
  KmcRun run;
  kmc::GasEnsemble gas = kmc::init_gas(section.gas);
  run.diameter = gas.diameter;
  run.packing_fraction = gas.packing_fraction();
  run.speed_scale = gas.speed_scale();
  run.seeded = kmc::inject_source(gas, section.source);
  std::optional<kmc::GasEnsemble> control;
  if (section.control) control = gas;

  std::vector<double> times;
  const auto n = static_cast<long>(std::floor(section.t_end / section.sample_interval + 1e-9));
  for (long i = 0; i <= n; ++i) times.push_back(gas.time + static_cast<double>(i) * section.sample_interval);

  kmc::RunOptions options = section.run;
  if (section.source.continuous) options.continuous_sources = {section.source};
  const kmc::FrontFitOptions fit{section.threshold, section.fit_start, section.source.channel};

  run.history = kmc::run_contagion(gas, section.t_end, times, options);
  run.fit = kmc::fit_front(run.history, fit);
  if (control) {
    options.contagion = false;
    run.control = kmc::run_contagion(*control, section.t_end, times, options);
    run.control_fit = kmc::fit_front(*run.control, fit);
  }
  return run;
}

}  // namespace intricacy::harness
