#include "intricacy/harness/verify.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "intricacy/algebra.hpp"
#include "intricacy/errors.hpp"
#include "intricacy/harness/experiments.hpp"
#include "intricacy/harness/oracles.hpp"

namespace intricacy::harness {

namespace {

using Eigen::MatrixXcd;

std::string fmt(double v, int precision = 3) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

CheckResult result(bool passed, std::string detail) {
  CheckResult r;
  r.passed = passed;
  r.detail = std::move(detail);
  return r;
}

double max_abs(const MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// Largest deviation from the single-atom relations for k channels.
double atom_identity_error(int k) {
  const auto ops = build_atom_operators(ChannelCount(k));
  const MatrixXcd id = ops.identity();
  double err = 0.0;
  MatrixXcd sum = MatrixXcd::Zero(k + 1, k + 1);
  for (int mu = 0; mu <= k; ++mu) {
    sum += ops.P(mu);
    err = std::max(err, max_abs(ops.P(mu) * ops.P(mu) - ops.P(mu)));
    for (int nu = 0; nu <= k; ++nu)
      if (nu != mu) err = std::max(err, max_abs(ops.P(mu) * ops.P(nu)));
  }
  err = std::max(err, max_abs(sum - id));
  for (int j = 1; j <= k; ++j) {
    const MatrixXcd& s = ops.S(j);
    err = std::max(err, max_abs(s * s));
    err = std::max(err, max_abs(s * ops.P(0) - s));
    err = std::max(err, max_abs(ops.P(0) * s));
    for (int nu = 1; nu <= k; ++nu)
      err = std::max(err, max_abs(ops.P(nu) * s - (nu == j ? s : MatrixXcd::Zero(k + 1, k + 1))));
    for (int nu = 1; nu <= k; ++nu) err = std::max(err, max_abs(s * ops.P(nu)));
  }
  return err;
}

// The two-channel pair operator written out term by term.
MatrixXcd literal_two_channel_pair() {
  MatrixXcd p0 = MatrixXcd::Zero(3, 3), p1 = p0, p2 = p0, s1 = p0, s2 = p0;
  p0(0, 0) = p1(1, 1) = p2(2, 2) = 1.0;
  s1(1, 0) = s2(2, 0) = 1.0;
  using Eigen::kroneckerProduct;
  return kroneckerProduct(p0, p0).eval() + kroneckerProduct(p1, p1).eval() +
         kroneckerProduct(p2, p2).eval() + kroneckerProduct((s1 * p0).eval(), p1).eval() +
         kroneckerProduct(p1, (s1 * p0).eval()).eval() + kroneckerProduct((s2 * p0).eval(), p2).eval() +
         kroneckerProduct(p2, (s2 * p0).eval()).eval();
}

// Cached indexed runs: verify and the acceptance binary ask for the same
// ones several times.
struct IndexedCache {
  std::mutex lock;
  std::map<std::string, IndexedRun> runs;
};

IndexedCache& cache() {
  static IndexedCache c;
  return c;
}

std::string key_of(const IndexedSection& s) {
  ExperimentConfig c;
  c.indexed = s;
  std::string key;
  for (const auto& [k, v] : c.echo())
    if (k.rfind("indexed.", 0) == 0) key += k + "=" + v + ";";
  return key;
}

const IndexedRun& cached_indexed(const IndexedSection& s) {
  auto& c = cache();
  std::lock_guard guard(c.lock);
  const std::string key = key_of(s);
  auto it = c.runs.find(key);
  if (it == c.runs.end()) it = c.runs.emplace(key, run_indexed_experiment(s)).first;
  return it->second;
}

// The configured indexed section restricted to two atoms on a given grid.
IndexedSection two_atom(const ExperimentConfig& cfg, int grid) {
  IndexedSection s = cfg.indexed;
  s.lattice.n_atoms = 2;
  s.lattice.grid_points = grid;
  s.lattice.packets.clear();
  if (s.lattice.initial_string.size() != 2) s.lattice.initial_string.clear();
  s.oracle = true;
  return s;
}

IndexedSection multichannel_with_m(const ExperimentConfig& cfg) {
  IndexedSection s = cfg.indexed;
  s.lattice.n_atoms = 2;
  s.lattice.channels = 2;
  s.lattice.grid_points = 8;
  s.lattice.packets.clear();
  s.lattice.initial_string.clear();
  s.coupling.present = true;
  s.coupling.grid_points = 8;
  s.coupling.channel_weights = {std::sqrt(0.3), std::sqrt(0.7)};
  s.oracle = false;
  return s;
}

}  // namespace

CheckResult timed_check(int criterion, std::string name, const std::function<CheckResult()>& body) {
  const auto start = std::chrono::steady_clock::now();
  CheckResult r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = result(false, std::string("exception: ") + e.what());
  }
  r.criterion = criterion;
  r.name = std::move(name);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

CheckResult check_algebra() {
  return timed_check(1, "algebra identities", [] {
    double err = 0.0;
    for (int k = 1; k <= 3; ++k) err = std::max(err, atom_identity_error(k));

    const auto ops = build_atom_operators(ChannelCount(1));
    const auto s = pauli_in_index_basis();
    const MatrixXcd id = MatrixXcd::Identity(2, 2);
    double pauli = max_abs(ops.P(0) - (id - s.z) / 2.0);
    pauli = std::max(pauli, max_abs(ops.P(1) - (id + s.z) / 2.0));
    pauli = std::max(pauli, max_abs(ops.S(1) - (s.x + Complex(0, 1) * s.y) / 2.0));

    bool monotone = true, deterministic = true;
    for (int k = 1; k <= 3; ++k) {
      const auto pair = build_pair_operator(ChannelCount(k));
      try {
        to_index_map(pair.matrix);
      } catch (const std::logic_error&) {
        deterministic = false;
      }
      for (int a = 0; a <= k; ++a)
        for (int b = 0; b <= k; ++b)
          if (const auto t = pair.transition(a, b))
            monotone = monotone && (t->first == a || a == 0) && (t->second == b || b == 0);
    }

    const auto pair1 = build_pair_operator(ChannelCount(1));
    using P = std::pair<int, int>;
    const bool table = pair1.transition(0, 0) == P{0, 0} && pair1.transition(0, 1) == P{1, 1} &&
                       pair1.transition(1, 0) == P{1, 1} && pair1.transition(1, 1) == P{1, 1};

    const auto pair2 = build_pair_operator(ChannelCount(2));
    const bool orthogonal = !pair2.transition(1, 2) && !pair2.transition(2, 1);
    const double literal = max_abs(pair2.matrix - literal_two_channel_pair());

    // A O = A on strings over {0, j}.
    double intertwine = 0.0;
    for (int k = 1; k <= 2; ++k) {
      const auto pair = build_pair_operator(ChannelCount(k));
      const StringSpace space(ChannelCount(k), 2);
      for (int j = 1; j <= k; ++j) {
        const MatrixXcd a = build_projection_A(ChannelCount(k), 2, j);
        const MatrixXcd diff = a * pair.matrix - a;
        for (std::int64_t col = 0; col < space.size(); ++col) {
          const auto d = space.decode(col);
          if ((d[0] == 0 || d[0] == j) && (d[1] == 0 || d[1] == j))
            intertwine = std::max(intertwine, diff.col(col).cwiseAbs().maxCoeff());
        }
      }
    }
    const StringSpace three(ChannelCount(1), 3);
    const auto amap = to_index_map(build_projection_A(ChannelCount(1), 3, 1));
    const bool a_example = amap[three.encode({0, 1, 1})] == three.encode({1, 1, 1});

    const bool ok = err <= 1e-12 && pauli <= 1e-12 && monotone && deterministic && table &&
                    orthogonal && literal <= 1e-12 && intertwine <= 1e-12 && a_example;
    return result(ok, "identity err " + fmt(err) + ", pauli err " + fmt(pauli) +
                          ", monotone " + (monotone ? "yes" : "no") + ", mixed pairs annihilated " +
                          (orthogonal ? "yes" : "no") + ", A O - A " + fmt(intertwine));
  });
}

CheckResult check_intertwining(const ExperimentConfig& cfg) {
  return timed_check(2, "consistency A H' = H A, trajectory", [&cfg] {
    IndexedSection small = two_atom(cfg, 8);
    const StateLayout layout = StateLayout::make(small.lattice, small.coupling);
    const MatrixXcd h_ext = oracle::extended_hamiltonian(layout, small.potential, small.coupling);
    const MatrixXcd h_std = oracle::lift_to_strings(
        layout, oracle::standard_hamiltonian(layout, small.potential, small.coupling));
    const MatrixXcd a = oracle::projection_matrix(layout, 1);
    const double op_err = max_abs(a * h_ext - h_std * a);
    const double scale = max_abs(h_ext);

    const IndexedRun& run = cached_indexed(two_atom(cfg, 16));
    if (!run.standard_error) return result(false, "standard-solver comparison not computed");
    const bool ok = op_err <= 1e-12 && *run.standard_error < 1e-6;
    return result(ok, "grid 8 |A H' - H A| " + fmt(op_err) + " (|H'| " + fmt(scale) +
                          "); grid 16 L2 diff at t=" + fmt(small.lattice.t_end) + " " +
                          fmt(*run.standard_error));
  });
}

CheckResult check_dense_oracle(const ExperimentConfig& cfg) {
  return timed_check(3, "RK4 vs dense exponential", [&cfg] {
    const IndexedRun& run = cached_indexed(two_atom(cfg, 16));
    if (!run.oracle_error) return result(false, "oracle comparison not computed");
    return result(*run.oracle_error < 1e-8, "dim " + std::to_string(run.layout.size()) +
                                                ", max amplitude err " + fmt(*run.oracle_error));
  });
}

CheckResult check_measure_identity(const ExperimentConfig& cfg) {
  return timed_check(4, "p1 + p0 + interference = 1", [&cfg] {
    const IndexedRun& base = cached_indexed(cfg.indexed);
    const IndexedRun& grid16 = cached_indexed(two_atom(cfg, 16));
    const IndexedRun& mc = cached_indexed(multichannel_with_m(cfg));
    const double err =
        std::max({base.max_identity_error, grid16.max_identity_error, mc.max_identity_error});
    const double interference = std::max(
        {base.max_abs_interference, grid16.max_abs_interference, mc.max_abs_interference});
    const std::size_t rows = base.measures.size() + grid16.measures.size() + mc.measures.size();
    return result(err <= 1e-12, std::to_string(rows) + " snapshot rows, max err " + fmt(err) +
                                    ", max |interference| " + fmt(interference));
  });
}

CheckResult check_tail_exponent() {
  return timed_check(5, "tail exponent q = 3 - sqrt(3)", [] {
    const double q = front::tail_exponent();
    const double res = std::abs(front::characteristic_residual(q));
    const double diff = std::abs(q - (3.0 - std::sqrt(3.0)));
    return result(res < 1e-12 && diff < 1e-12 && q > 0,
                  "q " + fmt(q, 12) + ", residual " + fmt(res));
  });
}

CheckResult check_front_profile(const ExperimentConfig& cfg) {
  return timed_check(6, "front profile (C = " + fmt(cfg.front.C) + ")", [&cfg] {
    const auto p = front::integrate_front(cfg.front);
    bool monotone = true;
    for (std::size_t i = 1; i < p.g.size(); ++i) monotone = monotone && p.g[i] <= p.g[i - 1];
    const double depth = front::depth_reaching(p, 0.99);
    const double slope = p.g_prime_at_front;
    const bool ok = monotone && depth <= 8.0 && std::abs(slope + 0.06) <= 0.03;
    return result(ok, "g'(0) " + fmt(slope, 4) + ", g > 0.99 from " + fmt(depth) +
                          " behind front, monotone " + (monotone ? "yes" : "no"));
  });
}

CheckResult check_constrained_front(const ExperimentConfig& cfg) {
  return timed_check(7, "constrained front at 3^-1/2 t", [&cfg] {
    const auto run = run_constrained_front(cfg.pde);
    const bool ok = run.max_deviation <= cfg.pde.dx;
    return result(ok, "max |front - v t| " + fmt(run.max_deviation) + " over t in [" +
                          fmt(cfg.pde.fit_start) + ", " + fmt(cfg.pde.t_end) + "], dx " +
                          fmt(cfg.pde.dx) + ", edge speed " + fmt(run.speed, 5) +
                          ", f1 = 0.5 level speed " +
                          (run.level_speed ? fmt(*run.level_speed, 5) : std::string("n/a")));
  });
}

CheckResult check_pulled_front(const ExperimentConfig& cfg) {
  return timed_check(8, "free front speed -> 0.8165", [&cfg] {
    const auto run = run_free_fronts(cfg.pde);
    const double target = 2.0 * std::sqrt(kinetics::kDiffusion);
    std::string detail;
    for (std::size_t i = 0; i < run.dx.size(); ++i)
      detail += (i ? ", " : "") + std::string("dx ") + fmt(run.dx[i]) + ": " + fmt(run.speed[i], 5);
    // Finest grid within 5%, and refinement does not move away from the target.
    std::size_t finest = 0;
    for (std::size_t i = 1; i < run.dx.size(); ++i)
      if (run.dx[i] < run.dx[finest]) finest = i;
    bool converging = true;
    for (std::size_t i = 0; i < run.dx.size(); ++i)
      converging = converging && std::abs(run.speed[finest] - target) <=
                                     std::abs(run.speed[i] - target) + 1e-3;
    const bool ok = std::abs(run.speed[finest] - target) <= 0.05 * target && converging;
    return result(ok, detail + " (target " + fmt(target, 5) + ")");
  });
}

CheckResult check_multichannel_limit(const ExperimentConfig& cfg) {
  return timed_check(9, "multichannel uniform limit", [&cfg] {
    const auto run = run_uniform_multichannel(cfg.pde);
    const double e1 = std::abs(run.final_f1 - cfg.pde.multichannel_p1);
    const double e2 = std::abs(run.final_f2 - cfg.pde.multichannel_p2);
    const bool ok = e1 <= 1e-6 && e2 <= 1e-6 && run.max_simplex_error <= 1e-10;
    return result(ok, "f1 " + fmt(run.final_f1, 9) + ", f2 " + fmt(run.final_f2, 9) +
                          ", simplex err " + fmt(run.max_simplex_error) + ", ratio drift " +
                          fmt(run.max_ratio_drift));
  });
}

CheckResult check_census(const ExperimentConfig& cfg) {
  return timed_check(11, "census active waves ~ 1e16", [&cfg] {
    const auto r = census::wave_census(cfg.census);
    const bool ok = r.active_waves >= 2e15 && r.active_waves <= 5e16;
    return result(ok, "active " + fmt(r.active_waves) + ", in box " + fmt(r.waves_in_box) +
                          ", rate " + fmt(r.rate_tau_d_inv) + " 1/s");
  });
}

CheckResult check_logistic(const ExperimentConfig& cfg) {
  return timed_check(0, "uniform field follows logistic", [&cfg] {
    const double f_star = 0.01, t_end = 10.0;
    auto error_at = [&](double dt) {
      auto grid = kinetics::FieldGrid::planar(0.0, 20.0 * cfg.pde.dx, cfg.pde.dx);
      grid.f1.setConstant(f_star);
      grid.f0 = (1.0 - grid.f1.array()).matrix();
      const long steps = std::lround(t_end / dt);
      double worst = 0.0;
      for (long s = 0; s < steps; ++s) {
        kinetics::step_fkpp(grid, dt);
        const double t = (s + 1) * dt;
        const double exact = f_star / (f_star + (1 - f_star) * std::exp(-t));
        worst = std::max(worst, (grid.f1.array() - exact).abs().maxCoeff());
      }
      return worst;
    };
    const double dt = 1.5 * cfg.pde.dx * cfg.pde.dx;
    const double e1 = error_at(dt), e2 = error_at(dt / 2);
    const double order = std::log2(e1 / e2);
    const bool ok = e1 <= dt && order > 0.8 && order < 1.2;
    return result(ok, "max err " + fmt(e1) + " at dt " + fmt(dt) + ", observed order " + fmt(order));
  });
}

CheckResult check_profile_invariants(const ExperimentConfig& cfg) {
  return timed_check(0, "front ODE residual and tail slope", [&cfg] {
    const auto p = front::integrate_front(cfg.front);
    const double residual = front::ode_residual(p);
    const double slope = front::tail_slope(p);
    const double rel = std::abs(slope - p.q) / p.q;
    return result(residual < 1e-6 && rel < 0.01,
                  "residual " + fmt(residual) + ", tail slope " + fmt(slope, 6) + " vs q " + fmt(p.q, 6));
  });
}

std::vector<CheckResult> run_verify(const ExperimentConfig& cfg) {
  return {check_algebra(),
          check_intertwining(cfg),
          check_dense_oracle(cfg),
          check_measure_identity(cfg),
          check_tail_exponent(),
          check_front_profile(cfg),
          check_constrained_front(cfg),
          check_pulled_front(cfg),
          check_multichannel_limit(cfg),
          check_census(cfg),
          check_logistic(cfg),
          check_profile_invariants(cfg)};
}

void print_table(std::ostream& out, const std::vector<CheckResult>& results) {
  out << std::left << std::setw(6) << "crit" << std::setw(6) << "ok" << std::setw(40) << "check"
      << std::setw(9) << "time(s)" << "detail\n";
  for (const auto& r : results) {
    const std::string id = r.criterion ? std::to_string(r.criterion) : "-";
    std::ostringstream t;
    t << std::fixed << std::setprecision(2) << r.seconds;
    out << std::left << std::setw(6) << id << std::setw(6) << (r.passed ? "PASS" : "FAIL")
        << std::setw(40) << r.name << std::setw(9) << t.str() << r.detail << '\n';
  }
}

}  // namespace intricacy::harness
