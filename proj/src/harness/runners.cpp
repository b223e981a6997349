#include "intricacy/harness/runners.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "intricacy/errors.hpp"
#include "intricacy/harness/experiments.hpp"
#include "intricacy/harness/output.hpp"
#include "intricacy/harness/verify.hpp"

namespace intricacy::harness {

namespace {

namespace fs = std::filesystem;

constexpr const char* kPairFlag = "pair_coupling_assembled_from_pair_operator";
constexpr const char* kF0Flag = "f0_equation_uses_laplacian_of_f0";

class Outputs {
 public:
  Outputs(const RunContext& ctx, RunManifest& manifest) : ctx_(ctx), manifest_(manifest) {}

  fs::path file(const std::string& name) {
    manifest_.outputs.push_back(name);
    return ctx_.out_dir / name;
  }
  bool plot() const { return ctx_.plot; }
  void plot(const PlotSpec& spec, const std::string& name) {
    if (ctx_.plot) emit_plot(spec, file(name));
  }
  void metric(const std::string& key, double value) { manifest_.metrics[key] = value; }

  void write_summary(const std::string& name) {
    CsvWriter csv(file(name), {"metric", "value"});
    for (const auto& [k, v] : manifest_.metrics) csv.row_text({k, format_number(v)});
  }

 private:
  const RunContext& ctx_;
  RunManifest& manifest_;
};

std::string string_label(const StringSpace& space, std::int64_t code) {
  std::string s;
  for (int d : space.decode(code)) s += std::to_string(d);
  return s;
}

int run_indexed(const RunContext& ctx, Outputs& out, std::ostream& log) {
  const auto& s = ctx.config.indexed;
  const IndexedRun run = run_indexed_experiment(s);
  {
    CsvWriter csv(out.file("indexed_measures.csv"),
                  {"t", "atom", "channel", "p1", "p0", "interference", "identity_error", "phys_norm"});
    for (const auto& r : run.measures)
      csv.row({r.t, double(r.atom), double(r.channel), r.m.p1, r.m.p0, r.m.interference,
               r.identity_error, r.m.phys_norm});
  }
  const StringSpace space = run.layout.string_space();
  {
    CsvWriter csv(out.file("indexed_strings.csv"), {"t", "string", "weight"});
    for (const auto& snap : run.snapshots)
      for (std::int64_t q = 0; q < space.size(); ++q)
        csv.row_text({format_number(snap.t), string_label(space, q),
                      format_number(snap.state.string_weight(q))});
  }
  out.metric("max_identity_error", run.max_identity_error);
  out.metric("max_abs_interference", run.max_abs_interference);
  out.metric("max_norm_drift", run.max_norm_drift);
  if (run.oracle_error) out.metric("dense_oracle_max_error", *run.oracle_error);
  if (run.standard_error) out.metric("standard_solver_l2_error", *run.standard_error);
  out.write_summary("indexed_summary.csv");

  if (out.plot()) {
    PlotSpec spec{"Intricacy measures", "t", "probability", {}};
    for (int atom = 0; atom < run.layout.n_atoms; ++atom) {
      PlotSeries p1{"p1 atom " + std::to_string(atom), {}, {}}, in{"interference atom " + std::to_string(atom), {}, {}, true};
      for (const auto& r : run.measures) {
        if (r.atom != atom || r.channel != s.measure_channel) continue;
        p1.x.push_back(r.t);
        p1.y.push_back(r.m.p1);
        in.x.push_back(r.t);
        in.y.push_back(r.m.interference);
      }
      spec.series.push_back(std::move(p1));
      spec.series.push_back(std::move(in));
    }
    out.plot(spec, "indexed_measures.svg");
  }
  log << "indexed: " << run.snapshots.size() << " snapshots, state size " << run.layout.size()
      << ", max identity error " << run.max_identity_error << ", max |interference| "
      << run.max_abs_interference << '\n';
  return kExitOk;
}

int run_kmc(const RunContext& ctx, Outputs& out, std::ostream& log) {
  const auto& s = ctx.config.kmc;
  const auto start = std::chrono::steady_clock::now();
  const KmcRun run = run_kmc_experiment(s);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto& h = run.history;
  {
    CsvWriter csv(out.file("kmc_profile.csv"), {"t", "z", "count", "f0", "f1", "f2"});
    for (const auto& sample : h.samples)
      for (std::size_t b = 0; b < h.bin_centers.size(); ++b)
        csv.row({sample.t, h.bin_centers[b], double(sample.bin_total(b)), sample.fraction(b, 0),
                 sample.fraction(b, 1), sample.fraction(b, 2)});
  }
  {
    std::vector<std::string> header{"t", "front_left", "front_right", "half_width", "tagged"};
    if (run.control_fit) header.push_back("control_half_width");
    CsvWriter csv(out.file("kmc_fronts.csv"), header);
    for (std::size_t i = 0; i < run.fit.t.size(); ++i) {
      const auto& tot = h.samples[i].totals;
      std::vector<double> row{run.fit.t[i], run.fit.front_left[i], run.fit.front_right[i],
                              run.fit.half_width[i], double(tot[1] + tot[2])};
      if (run.control_fit) row.push_back(run.control_fit->half_width[i]);
      csv.row(row);
    }
  }
  out.metric("diameter", run.diameter);
  out.metric("packing_fraction", run.packing_fraction);
  out.metric("speed_scale", run.speed_scale);
  out.metric("seeded", double(run.seeded));
  out.metric("collisions", double(h.collisions));
  out.metric("contagion_events", double(h.contagion_events));
  out.metric("relative_energy_change", std::abs(h.energy_end - h.energy_start) / h.energy_start);
  out.metric("max_collision_energy_error", h.max_energy_error);
  out.metric("tags_monotone", h.tags_monotone ? 1.0 : 0.0);
  out.metric("front_speed", run.fit.speed);
  out.metric("front_r2", run.fit.r2);
  out.metric("front_growth_exponent", run.fit.growth_exponent);
  out.metric("front_sqrt_model_rms", run.fit.sqrt_rms);
  out.metric("front_linear_rms", run.fit.linear_rms);
  out.metric("front_truncated", run.fit.truncated ? 1.0 : 0.0);
  if (run.control_fit) {
    out.metric("control_growth_exponent", run.control_fit->growth_exponent);
    out.metric("control_speed", run.control_fit->speed);
  }
  out.metric("run_seconds", seconds);
  out.write_summary("kmc_summary.csv");

  if (out.plot()) {
    PlotSpec spec{"Contagion front half-width", "t (mean free times)", "half-width (mean free paths)", {}};
    spec.series.push_back({"contagion", run.fit.t, run.fit.half_width});
    if (run.control_fit) spec.series.push_back({"no contagion", run.control_fit->t, run.control_fit->half_width, true});
    out.plot(spec, "kmc_fronts.svg");
  }
  log << "kmc: N=" << s.gas.n_particles << ", seeded " << run.seeded << ", front speed "
      << run.fit.speed << " (R^2 " << run.fit.r2 << ")";
  if (run.control_fit) log << ", control exponent " << run.control_fit->growth_exponent;
  log << ", " << seconds << " s\n";
  return kExitOk;
}

int run_pde(const RunContext& ctx, Outputs& out, std::ostream& log) {
  const auto& p = ctx.config.pde;
  const auto run = run_constrained_front(p);
  {
    CsvWriter csv(out.file("pde_history.csv"), {"t", "z", "f0", "f1", "f2"});
    for (const auto& s : run.history.snapshots)
      for (Eigen::Index i = 0; i < s.f1.size(); ++i)
        csv.row({s.t, run.history.z[i], s.f0[i], s.f1[i], s.f2[i]});
  }
  {
    CsvWriter csv(out.file("pde_front.csv"), {"t", "front_left", "front_right", "threshold"});
    for (std::size_t i = 0; i < run.t.size(); ++i)
      csv.row({run.t[i], run.left[i], run.right[i], p.threshold});
  }
  out.metric("constrained_max_deviation", run.max_deviation);
  out.metric("constrained_speed", run.speed);
  if (run.level_speed) out.metric("constrained_level_speed", *run.level_speed);
  out.metric("interior_min_f1", run.interior_min);

  if (p.free_enabled) {
    const auto free = run_free_fronts(p);
    CsvWriter csv(out.file("pde_free_fronts.csv"), {"dx", "t", "front_right"});
    for (std::size_t k = 0; k < free.dx.size(); ++k) {
      for (std::size_t i = 0; i < free.t[k].size(); ++i) csv.row({free.dx[k], free.t[k][i], free.right[k][i]});
      out.metric("free_speed_dx_" + format_number(free.dx[k]), free.speed[k]);
    }
    if (out.plot()) {
      PlotSpec spec{"Unconstrained front", "t (mean free times)", "front position (mean free paths)", {}};
      for (std::size_t k = 0; k < free.dx.size(); ++k)
        spec.series.push_back({"dx " + format_number(free.dx[k]), free.t[k], free.right[k]});
      out.plot(spec, "pde_free_fronts.svg");
    }
  }
  if (p.multichannel_enabled) {
    const auto mc = run_uniform_multichannel(p);
    CsvWriter csv(out.file("pde_multichannel.csv"), {"t", "f0", "f1", "f2"});
    for (const auto& s : mc.history.snapshots) csv.row({s.t, s.f0[0], s.f1[0], s.f2[0]});
    out.metric("multichannel_final_f1", mc.final_f1);
    out.metric("multichannel_final_f2", mc.final_f2);
    out.metric("multichannel_max_simplex_error", mc.max_simplex_error);
    out.metric("multichannel_max_ratio_drift", mc.max_ratio_drift);
  }
  out.write_summary("pde_summary.csv");

  if (out.plot()) {
    PlotSpec spec{"Constrained front position", "t (mean free times)", "z (mean free paths)", {}};
    spec.series.push_back({"right front", run.t, run.right});
    std::vector<double> line;
    for (double t : run.t) line.push_back(p.source_z + p.constraint_speed * t);
    spec.series.push_back({"z0 + t / sqrt(3)", run.t, line, true});
    out.plot(spec, "pde_front.svg");

    const auto& last = run.history.snapshots.back();
    PlotSpec prof{"f1 at t = " + format_number(last.t), "z (mean free paths)", "f1", {}};
    prof.series.push_back({"f1", std::vector<double>(run.history.z.begin(), run.history.z.end()),
                           std::vector<double>(last.f1.begin(), last.f1.end())});
    out.plot(prof, "pde_profile.svg");
  }
  log << "pde: constrained front max deviation " << run.max_deviation << " (dx " << p.dx
      << "), speed " << run.speed << '\n';
  return kExitOk;
}

int run_front(const RunContext& ctx, Outputs& out, std::ostream& log) {
  const auto p = front::integrate_front(ctx.config.front);
  {
    CsvWriter csv(out.file("front_profile.csv"), {"x", "g"});
    for (std::size_t i = 0; i < p.x.size(); ++i) csv.row({p.x[i], p.g[i]});
  }
  {
    CsvWriter csv(out.file("front_summary.csv"), {"C", "q", "g_prime_at_front"});
    csv.row({p.C, p.q, p.g_prime_at_front});
  }
  out.metric("q", p.q);
  out.metric("g_prime_at_front", p.g_prime_at_front);
  out.metric("ode_residual", front::ode_residual(p));
  out.metric("tail_slope", front::tail_slope(p));
  out.metric("depth_g_0.99", front::depth_reaching(p, 0.99));
  if (out.plot()) {
    PlotSpec spec{"Intricacy behind a wave front", "x (mean free paths)", "g", {}};
    spec.series.push_back({"g(x)", p.x, p.g});
    out.plot(spec, "front_profile.svg");
  }
  log << std::setprecision(8) << "front: C " << p.C << ", q " << p.q << ", g'(0) "
      << p.g_prime_at_front << '\n';
  return kExitOk;
}

int run_census(const RunContext& ctx, Outputs& out, std::ostream& log) {
  const auto& in = ctx.config.census;
  const auto r = census::wave_census(in);
  CsvWriter csv(out.file("census.csv"), {"n_e", "v_e", "v_prime", "L", "lambda_mfp",
                                         "rate_tau_d_inv", "waves_in_box", "active_waves"});
  csv.row({in.n_e, in.v_e, in.v_prime, in.L, in.lambda_mfp, r.rate_tau_d_inv, r.waves_in_box,
           r.active_waves});
  out.metric("rate_tau_d_inv", r.rate_tau_d_inv);
  out.metric("waves_in_box", r.waves_in_box);
  out.metric("active_waves", r.active_waves);
  log << std::setprecision(4) << "wave generation rate  n_e v_e L^2       = " << r.rate_tau_d_inv
      << " 1/s\n"
      << "moving waves in box   n_e (v_e/v') L^3  = " << r.waves_in_box << '\n'
      << "active waves at a point  n_e L^2 lambda = " << r.active_waves << '\n';
  return kExitOk;
}

int run_verify_command(const RunContext& ctx, Outputs& out, std::ostream& log) {
  const auto results = run_verify(ctx.config);
  print_table(log, results);
  CsvWriter csv(out.file("verify.csv"), {"criterion", "check", "passed", "seconds", "detail"});
  bool all = true;
  for (const auto& r : results) {
    csv.row_text({std::to_string(r.criterion), r.name, r.passed ? "true" : "false",
                  format_number(r.seconds), r.detail});
    all = all && r.passed;
  }
  log << (all ? "all checks passed" : "verification FAILED") << '\n';
  return all ? kExitOk : kExitVerify;
}

}  // namespace

int run_subcommand(const std::string& name, const RunContext& ctx, std::ostream& log,
                   std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  RunManifest manifest;
  manifest.subcommand = name;
  manifest.seed = ctx.config.kmc.gas.seed;
  manifest.config = ctx.config.echo();
  const bool pair_terms = ctx.config.indexed.potential.strength != 0.0;
  manifest.flags[kPairFlag] = (name == "indexed" || name == "verify") && pair_terms;
  manifest.flags[kF0Flag] =
      (name == "pde" && ctx.config.pde.multichannel_enabled) || name == "verify";

  std::error_code ec;
  fs::create_directories(ctx.out_dir, ec);
  if (ec) {
    err << "error: cannot create output directory " << ctx.out_dir << ": " << ec.message() << '\n';
    return kExitConfig;
  }
  Outputs out(ctx, manifest);
  int code = kExitOk;
  try {
    if (name == "indexed") code = run_indexed(ctx, out, log);
    else if (name == "kmc") code = run_kmc(ctx, out, log);
    else if (name == "pde") code = run_pde(ctx, out, log);
    else if (name == "front") code = run_front(ctx, out, log);
    else if (name == "census") code = run_census(ctx, out, log);
    else if (name == "verify") code = run_verify_command(ctx, out, log);
    else throw ConfigError("unknown subcommand " + name);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    code = kExitConfig;
  } catch (const NumericAbort& e) {
    err << "numeric abort: " << e.what() << '\n';
    code = kExitNumeric;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    code = kExitConfig;
  }
  manifest.exit_code = code;
  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  manifest.write(ctx.out_dir / "manifest.json");
  return code;
}

}  // namespace intricacy::harness
