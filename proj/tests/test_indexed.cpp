#include <doctest.h>

#include <cmath>

#include "intricacy/errors.hpp"
#include "intricacy/evolution.hpp"
#include "intricacy/harness/oracles.hpp"

using namespace intricacy;

namespace {

LatticeConfig small_lattice(int n_atoms = 2, int grid = 8) {
  LatticeConfig c;
  c.n_atoms = n_atoms;
  c.grid_points = grid;
  c.box_length = 10.0;
  c.dt = 1e-3;
  c.t_end = 0.5;
  return c;
}

// Everything on one string, uniform spatial amplitude.
IndexedWaveFunction on_string(const StateLayout& layout, std::int64_t q, Complex value = 1.0) {
  IndexedWaveFunction s(layout);
  s.block(0, q).setConstant(value);
  return s;
}

double identity_error(const IntricacyMeasures& m) { return std::abs(m.p1 + m.p0 + m.interference - 1.0); }

}  // namespace

TEST_CASE("initial state sits on the all-zero string") {
  const auto cfg = small_lattice();
  const MCoupling none;
  const auto psi = init_state(cfg, none);
  const auto space = psi.layout().string_space();
  CHECK(psi.string_weight(space.uniform(0)) == doctest::Approx(1.0).epsilon(1e-12));
  for (std::int64_t q = 1; q < space.size(); ++q) CHECK(psi.string_weight(q) == 0.0);
  for (int atom = 0; atom < 2; ++atom) {
    const auto m = intricacy_measures(psi, atom, 1);
    CHECK(m.p1 == 0.0);
    CHECK(m.p0 == doctest::Approx(1.0));
    CHECK(m.interference == 0.0);
    CHECK(m.phys_norm == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(intricacy_measures(psi, 2, 1), std::out_of_range);
}

TEST_CASE("three atoms and two channels allocate 27 strings") {
  auto cfg = small_lattice(3);
  cfg.channels = 2;
  const auto psi = init_state(cfg, MCoupling{});
  CHECK(psi.layout().strings() == 27);
  CHECK(psi.string_weight(0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("M with c1 = 1 carries a single label") {
  const auto cfg = small_lattice();
  MCoupling m;
  m.present = true;
  m.grid_points = 8;
  const auto psi = init_state(cfg, m);
  CHECK(psi.layout().has_m);
  CHECK(psi.layout().labels == 1);
  CHECK(psi.layout().strings() == 4);
  CHECK(physical_norm(psi.layout(), project_physical(psi)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("configuration errors") {
  auto cfg = small_lattice();
  cfg.grid_points = 4;
  CHECK_THROWS_AS(init_state(cfg, MCoupling{}), ConfigError);
  cfg = small_lattice();
  cfg.n_atoms = 5;
  CHECK_THROWS_AS(init_state(cfg, MCoupling{}), ConfigError);
  cfg = small_lattice();
  cfg.initial_string = {0, 2};
  CHECK_THROWS_AS(init_state(cfg, MCoupling{}), ConfigError);
  MCoupling m;
  m.present = true;
  m.grid_points = 8;
  m.channel_weights = {0.5};
  CHECK_THROWS_AS(init_state(small_lattice(), m), ConfigError);
}

TEST_CASE("pair coupling moves weight only along the allowed transitions") {
  const auto cfg = small_lattice();
  const auto layout = StateLayout::make(cfg, MCoupling{});
  const ExtendedHamiltonian h(layout, PairPotential{}, MCoupling{});
  const Eigen::MatrixXcd dense = h.to_dense();
  const auto space = layout.string_space();
  const auto block = [&](std::int64_t to, std::int64_t from) {
    return dense.block(layout.offset(0, to), layout.offset(0, from), layout.space(), layout.space())
        .cwiseAbs()
        .maxCoeff();
  };
  const std::int64_t q00 = space.encode({0, 0}), q01 = space.encode({0, 1}),
                     q10 = space.encode({1, 0}), q11 = space.encode({1, 1});
  CHECK(block(q11, q01) > 0.0);
  CHECK(block(q11, q10) > 0.0);
  CHECK(block(q01, q00) == 0.0);
  CHECK(block(q10, q00) == 0.0);
  CHECK(block(q11, q00) == 0.0);
  CHECK(block(q00, q11) == 0.0);
  CHECK(block(q01, q10) == 0.0);
  CHECK(block(q10, q01) == 0.0);
}

TEST_CASE("three-atom right-hand side for string (0,1,1)") {
  const auto cfg = small_lattice(3);
  const auto layout = StateLayout::make(cfg, MCoupling{});
  const PairPotential v{2.0, 3.0};
  const ExtendedHamiltonian h(layout, v, MCoupling{});
  const auto space = layout.string_space();
  const std::int64_t target = space.encode({0, 1, 1});
  const int g = cfg.grid_points;

  for (const auto& source : {std::vector<int>{0, 0, 1}, std::vector<int>{0, 1, 0}}) {
    const auto out = apply_extended_hamiltonian(on_string(layout, space.encode(source)), h);
    double err = 0.0;
    for (std::int64_t s = 0; s < layout.space(); ++s) {
      const int ib = static_cast<int>((s / g) % g), ic = static_cast<int>(s % g);
      err = std::max(err, std::abs(out.block(0, target)[s] - v(cfg.node(ib), cfg.node(ic))));
    }
    CHECK(err < 1e-12);
  }
}

TEST_CASE("free evolution keeps every string weight") {
  auto cfg = small_lattice();
  cfg.initial_string = {1, 0};
  const auto psi = init_state(cfg, MCoupling{});
  const ExtendedHamiltonian h(psi.layout(), PairPotential{0.0, 1.0}, MCoupling{});
  const auto traj = evolve(psi, h, {1e-3, 0.5, 0.1, 1e-6});
  for (const auto& snap : traj)
    for (std::int64_t q = 0; q < psi.layout().strings(); ++q)
      CHECK(snap.state.string_weight(q) == doctest::Approx(psi.string_weight(q)).epsilon(1e-9));
}

TEST_CASE("RK4 matches the dense exponential") {
  auto cfg = small_lattice();
  cfg.initial_string = {1, 0};
  const auto psi = init_state(cfg, MCoupling{});
  const PairPotential v{};
  const ExtendedHamiltonian h(psi.layout(), v, MCoupling{});
  const auto traj = evolve(psi, h, {1e-3, 0.3, 0.0, 1e-6});
  const Eigen::VectorXcd exact =
      oracle::propagate(oracle::extended_hamiltonian(psi.layout(), v, MCoupling{}), psi.data(), 0.3);
  CHECK((traj.back().state.data() - exact).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("weight only flows to componentwise larger strings") {
  auto cfg = small_lattice(3);
  cfg.initial_string = {1, 0, 0};
  const auto psi = init_state(cfg, MCoupling{});
  const ExtendedHamiltonian h(psi.layout(), PairPotential{4.0, 3.0}, MCoupling{});
  const auto traj = evolve(psi, h, {1e-3, 0.5, 0.25, 1e-6});
  const auto space = psi.layout().string_space();
  const auto& last = traj.back().state;
  double gained = 0.0;
  for (std::int64_t q = 0; q < space.size(); ++q) {
    if (space.digit(q, 0) == 0) CHECK(last.string_weight(q) == 0.0);
    if (q != space.encode({1, 0, 0})) gained += last.string_weight(q);
  }
  CHECK(gained > 1e-6);
}

TEST_CASE("projection A preserves the physical sum") {
  auto cfg = small_lattice();
  cfg.initial_string = {1, 0};
  const auto psi = init_state(cfg, MCoupling{});
  const ExtendedHamiltonian h(psi.layout(), PairPotential{}, MCoupling{});
  const auto mid = evolve(psi, h, {1e-3, 0.4, 0.0, 1e-6}).back().state;
  const auto projected = apply_projection_A(mid);
  CHECK((project_physical(projected) - project_physical(mid)).cwiseAbs().maxCoeff() < 1e-14);
  const auto m = intricacy_measures(projected, 1, 1);
  CHECK(m.p1 == doctest::Approx(1.0));
  CHECK(m.p0 == doctest::Approx(0.0));
  CHECK(std::abs(m.interference) < 1e-14);
}

TEST_CASE("opposite amplitudes on two strings project to zero") {
  const auto layout = StateLayout::make(small_lattice(), MCoupling{});
  IndexedWaveFunction s(layout);
  s.block(0, 1).setConstant(Complex(0.3, 0.1));
  s.block(0, 2).setConstant(Complex(-0.3, -0.1));
  CHECK(project_physical(s).cwiseAbs().maxCoeff() == 0.0);
  const auto only = on_string(layout, 3, Complex(0.0, 2.0));
  CHECK((project_physical(only) - only.block(0, 3)).norm() == 0.0);
}

TEST_CASE("measure identity holds mid-evolution") {
  auto cfg = small_lattice();
  cfg.grid_points = 12;
  cfg.initial_string = {1, 0};
  const auto psi = init_state(cfg, MCoupling{});
  const ExtendedHamiltonian h(psi.layout(), PairPotential{}, MCoupling{});
  const auto traj = evolve(psi, h, {1e-3, 1.0, 0.1, 1e-6});
  bool interior = false;
  for (const auto& snap : traj) {
    const auto m = intricacy_measures(snap.state, 1, 1);
    CHECK(identity_error(m) < 1e-12);
    CHECK(m.phys_norm == doctest::Approx(1.0).epsilon(1e-6));
    interior = interior || (m.p1 > 0.0 && m.p1 < 1.0);
  }
  CHECK(interior);
}

TEST_CASE("unstable time step is rejected") {
  const auto psi = init_state(small_lattice(), MCoupling{});
  const ExtendedHamiltonian h(psi.layout(), PairPotential{}, MCoupling{});
  CHECK_THROWS_AS(evolve(psi, h, {2.0 * stable_time_step(h), 0.1, 0.0, 1e-6}), ConfigError);
}

TEST_CASE("two-channel sectors keep the weights of the M label") {
  auto cfg = small_lattice();
  cfg.channels = 2;
  MCoupling m;
  m.present = true;
  m.grid_points = 8;
  m.channel_weights = {std::sqrt(0.3), std::sqrt(0.7)};
  const auto psi = init_state(cfg, m);
  const ExtendedHamiltonian h(psi.layout(), PairPotential{}, m);
  const auto traj = evolve(psi, h, {2e-3, 1.5, 0.5, 1e-6});
  const auto& layout = psi.layout();
  const auto space = layout.string_space();
  for (const auto& snap : traj) {
    for (int l = 0; l < 2; ++l)
      for (std::int64_t q = 0; q < space.size(); ++q) {
        // Strings carrying the other label's channel never appear.
        const auto d = space.decode(q);
        const int other = l == 0 ? 2 : 1;
        if (d[0] == other || d[1] == other) CHECK(snap.state.block(l, q).norm() == 0.0);
      }
    // Each label's physical weight is fixed by |c_j|^2.
    const Eigen::VectorXcd phys = project_physical(snap.state);
    const double w0 = phys.head(layout.space()).squaredNorm() * layout.cell_volume();
    const double w1 = phys.tail(layout.space()).squaredNorm() * layout.cell_volume();
    CHECK(w0 == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(w1 == doctest::Approx(0.7).epsilon(1e-6));
    const auto m1 = intricacy_measures(snap.state, 0, 1);
    CHECK(std::abs(m1.p1 + m1.p0 + m1.interference - 1.0) < 1e-12);
  }
  // The M packet generated weight on intricate strings. String (0,0) itself
  // only feels the kinetic and pair terms, so its own weight stays put.
  double raised = 0.0;
  for (std::int64_t q = 1; q < space.size(); ++q) raised += traj.back().state.string_weight(q);
  CHECK(raised > 1e-6);
  CHECK(traj.back().state.string_weight(0) == doctest::Approx(1.0).epsilon(1e-9));
}
