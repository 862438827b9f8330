#include "mch/runio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mch/predict.hpp"
#include "mch/tfunc.hpp"

namespace mch {

namespace {

namespace fs = std::filesystem;

void ensure_outdir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
}

class Out {
 public:
  Out(const ExperimentConfig& cfg, const std::string& name)
      : path_(cfg.outdir + "/" + name), quiet_(cfg.quiet), f_(path_) {
    if (!f_) throw IoError("cannot open output file: " + path_);
  }
  ~Out() {
    f_.close();
    if (!quiet_) std::printf("wrote %s\n", path_.c_str());
  }
  Out& line(const std::string& s) {
    f_ << s << '\n';
    if (!f_) throw IoError("write failed: " + path_);
    return *this;
  }
  Out& kv(const std::string& key, double v) { return line(key + " " + fmt17(v)); }
  Out& kv(const std::string& key, const std::string& v) { return line(key + " " + v); }

 private:
  std::string path_;
  bool quiet_;
  std::ofstream f_;
};

std::string row(std::initializer_list<double> vals) {
  std::string s;
  for (double v : vals) {
    if (!s.empty()) s += "  ";
    s += fmt17(v);
  }
  return s;
}

OdeOpts ode_opts(const ScatterCfg& c) { return {c.ode_rel_tol, c.ode_abs_tol}; }

ProfileOpts profile_opts(const EngineCfg& c) {
  ProfileOpts o;
  o.ywin = c.ywin;
  o.gamma_cap = c.gamma_cap;
  o.tail_tol = c.tail_tol;
  o.sweep_step = c.sweep_step;
  return o;
}

std::vector<Generator> require_generators(const ExperimentConfig& cfg,
                                          const char* verb) {
  if (cfg.profile.kind != "solitons" || cfg.profile.generators.empty())
    throw ConfigError(std::string(verb) + ": needs profile.kind=solitons with generators");
  return cfg.profile.generators;
}

PhaseContext make_ctx(const ExperimentConfig& cfg) {
  return PhaseContext::make(cfg.ctx.xi, cfg.ctx.delta0);
}

std::vector<SpectralPoint> as_points(const std::vector<Generator>& gens) {
  std::vector<SpectralPoint> pts;
  for (const auto& g : gens) pts.push_back({g.zeta, g.Ct, g.kind});
  return pts;
}

// scattering data for the predictor: reflectionless generator data directly,
// anything else through the reflection grid (plus located zeros if enabled)
ScatteringData scattering_from_cfg(const ExperimentConfig& cfg) {
  ScatteringData sd;
  if (cfg.profile.kind == "solitons") {
    sd.spectrum.generators = as_points(cfg.profile.generators);
    return sd;
  }
  const InitialProfile pr = profile_from_cfg(cfg.profile, cfg.engine);
  sd = reflection_grid(pr, make_z_grid(cfg.scattering.zmin, cfg.scattering.n_half),
                       ode_opts(cfg.scattering), cfg.scattering.a_min);
  if (cfg.locate.enabled) {
    OdeOpts lo{cfg.locate.ode_rel_tol, cfg.locate.ode_abs_tol};
    auto zeros = locate_zeros(pr, cfg.locate.rect, lo);
    for (auto& zp : zeros)
      if (std::abs(std::abs(zp.zeta) - 1.0) < cfg.locate.snap_tol) {
        zp.zeta /= std::abs(zp.zeta);
        zp.kind = PoleKind::OnCircle;
      }
    sd.spectrum.generators = zeros;
  }
  return sd;
}

// initial PDE state from the config profile; solitons enter as the engine
// field u, other profiles as m samples
FieldGrid initial_grid(const ExperimentConfig& cfg, double t0) {
  FieldGrid g = make_grid(cfg.pde.L, cfg.pde.n);
  if (cfg.profile.kind == "solitons") {
    g = grid_from_u(cfg.pde.L,
                    engine_field(cfg.profile.generators, t0, g.x, cfg.engine));
  } else {
    const InitialProfile pr = profile_from_cfg(cfg.profile, cfg.engine);
    std::vector<double> m(g.n);
    for (int j = 0; j < g.n; ++j) m[j] = pr.m(g.x[j]);
    g = grid_from_m(cfg.pde.L, m);
  }
  // the periodic domain stands in for the line; the fields must have decayed
  // by the seam or the periodization error leaks into every comparison
  const double seam = std::max(std::abs(g.u.front()), std::abs(g.m.front()));
  if (seam > cfg.pde.seam_tol)
    throw ConfigError("pde: initial field at the domain seam above seam_tol; enlarge pde.L");
  return g;
}

double checked_segment(double from, double to, double dt) {
  const double span = to - from;
  const double k = span / dt;
  if (std::abs(k - std::lround(k)) > 1e-9)
    throw ConfigError("pde: time span not a multiple of dt");
  return span;
}

}  // namespace

InitialProfile read_profile_file(const std::string& path, double trunc_tol) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open profile file: " + path);
  std::vector<double> x, m;
  std::string lineb;
  int lineno = 0;
  while (std::getline(in, lineb)) {
    ++lineno;
    const auto first = lineb.find_first_not_of(" \t\r");
    if (first == std::string::npos || lineb[first] == '#') continue;
    std::istringstream ss(lineb);
    double xv, mv;
    if (!(ss >> xv >> mv))
      throw ConfigError("profile file " + path + ": parse error at line " +
                        std::to_string(lineno));
    std::string rest;
    if (ss >> rest)
      throw ConfigError("profile file " + path + ": trailing data at line " +
                        std::to_string(lineno));
    x.push_back(xv);
    m.push_back(mv);
  }
  if (x.size() < 8)
    throw ConfigError("profile file " + path + ": fewer than 8 samples");
  return InitialProfile::from_samples(std::move(x), std::move(m), trunc_tol);
}

void write_profile_file(const std::string& path, const std::vector<double>& x,
                        const std::vector<double>& m) {
  if (x.size() != m.size()) throw ConfigError("profile write: size mismatch");
  std::ofstream f(path);
  if (!f) throw IoError("cannot open output file: " + path);
  f << "# initial profile samples\n# columns: x m\n";
  for (size_t i = 0; i < x.size(); ++i)
    f << fmt17(x[i]) << "  " << fmt17(m[i]) << '\n';
  if (!f) throw IoError("write failed: " + path);
}

std::vector<double> engine_field(const std::vector<Generator>& gens, double t,
                                 const std::vector<double>& x,
                                 const EngineCfg& ecfg) {
  return profile_on_x_grid(make_soliton_data(gens), t, x, profile_opts(ecfg));
}

InitialProfile profile_from_cfg(const ProfileCfg& pcfg, const EngineCfg& ecfg) {
  if (pcfg.kind == "gaussian")
    return InitialProfile::gaussian(pcfg.A, pcfg.w, pcfg.X, pcfg.h);
  if (pcfg.kind == "zero") return InitialProfile::zero(pcfg.X, pcfg.h);
  if (pcfg.kind == "file") return read_profile_file(pcfg.path, pcfg.trunc_tol);
  // solitons: engine field on a power-of-two grid, m = u - u_xx spectrally,
  // resampled onto the requested uniform window
  int n2 = 256;
  while (n2 < 2.0 * pcfg.X / pcfg.h) n2 *= 2;
  std::vector<double> xg(n2);
  for (int j = 0; j < n2; ++j) xg[j] = -pcfg.X + 2.0 * pcfg.X * j / n2;
  const std::vector<double> u = engine_field(pcfg.generators, ecfg.t, xg, ecfg);
  const FieldGrid g = grid_from_u(2.0 * pcfg.X, u);
  const CubicSpline msp(xg, g.m);
  const int n = static_cast<int>(std::lround(2 * pcfg.X / pcfg.h)) + 1;
  const std::vector<double> xs = linspace(-pcfg.X, pcfg.X, n);
  std::vector<double> ms(n);
  for (int j = 0; j < n; ++j) ms[j] = msp(std::min(xs[j], msp.x_max()));
  return InitialProfile::from_samples(xs, ms, pcfg.trunc_tol);
}

void cmd_scatter(const ExperimentConfig& cfg) {
  ensure_outdir(cfg.outdir);
  const InitialProfile pr = profile_from_cfg(cfg.profile, cfg.engine);
  const auto zgrid = make_z_grid(cfg.scattering.zmin, cfg.scattering.n_half);
  ScatteringData sd =
      reflection_grid(pr, zgrid, ode_opts(cfg.scattering), cfg.scattering.a_min);
  std::vector<SpectralPoint> zeros;
  if (cfg.locate.enabled) {
    OdeOpts lo{cfg.locate.ode_rel_tol, cfg.locate.ode_abs_tol};
    zeros = locate_zeros(pr, cfg.locate.rect, lo);
    for (auto& zp : zeros)
      if (std::abs(std::abs(zp.zeta) - 1.0) < cfg.locate.snap_tol) {
        zp.zeta /= std::abs(zp.zeta);
        zp.kind = PoleKind::OnCircle;
      }
    sd.spectrum.generators = zeros;
  }
  {
    Out f(cfg, "reflection.txt");
    f.line("# reflection coefficient grid");
    f.line("# columns: z Re_r Im_r abs_a abs_b");
    for (size_t i = 0; i < sd.z_grid.size(); ++i)
      f.line(row({sd.z_grid[i], sd.r[i].real(), sd.r[i].imag(),
                  std::abs(sd.a[i]), std::abs(sd.b[i])}));
  }
  {
    // the value of a at z = i determined by the profile alone
    const double a_ident = std::exp(-0.5 * pr.qm1_total());
    Out f(cfg, "scatter_report.txt");
    f.line("# direct-scattering diagnostics");
    f.kv("unitarity_defect", sd.unitarity_defect);
    f.kv("sym_recip_defect", sd.sym_recip_defect);
    f.kv("sym_neg_defect", sd.sym_neg_defect);
    f.kv("r_near_zero", sd.r_near_zero);
    f.kv("a_at_i_re", sd.a_at_i.real());
    f.kv("a_at_i_im", sd.a_at_i.imag());
    f.kv("a_identity", a_ident);
    f.kv("a_identity_defect", std::abs(sd.a_at_i - a_ident));
    f.kv("moment_zero", moment_zero_check(sd.z_grid, sd.r));
    for (const auto& zp : zeros)
      f.line("zero " + row({zp.zeta.real(), zp.zeta.imag(), zp.C.real(),
                            zp.C.imag()}));
  }
}

void cmd_partition(const ExperimentConfig& cfg) {
  ensure_outdir(cfg.outdir);
  const auto gens = require_generators(cfg, "partition");
  const PhaseContext ctx = make_ctx(cfg);
  const DiscreteSpectrum spec = expand_spectrum(as_points(gens));
  const Partition part = partition_spectrum(spec, ctx);
  auto region_of = [&](int gi) -> std::string {
    for (int i : part.nabla)
      if (i == gi) return "nabla";
    for (int i : part.delta)
      if (i == gi) return "delta";
    return "lambda";
  };
  Out f(cfg, "partition_report.txt");
  f.line("# pole partition at xi = " + fmt17(ctx.xi));
  f.kv("regime", ctx.regime == Regime::Left ? "left" : "right");
  for (size_t gi = 0; gi < spec.generators.size(); ++gi) {
    const auto& g = spec.generators[gi];
    f.line("gen " + std::to_string(gi) + " zeta " + fmt17(g.zeta.real()) + " " +
           fmt17(g.zeta.imag()) +
           (g.kind == PoleKind::OnCircle ? " kind circle" : " kind quad") +
           " speed " + fmt17(wave_speed(g.zeta)) + " region " +
           region_of(static_cast<int>(gi)));
    const int len = spec.orbit_len(static_cast<int>(gi));
    for (int j = 0; j < len; ++j) {
      const cplx m = spec.expanded[spec.orbit_start[gi] + j].zeta;
      f.line("  member " + fmt17(m.real()) + " " + fmt17(m.imag()) +
             " im_theta " + fmt17(im_theta(m, ctx)));
    }
  }
  f.kv("rho0", part.rho0);
}

void cmd_solitons(const ExperimentConfig& cfg) {
  ensure_outdir(cfg.outdir);
  const auto gens = require_generators(cfg, "solitons");
  const SolitonData data = make_soliton_data(gens);
  const auto x = linspace(cfg.engine.x_lo, cfg.engine.x_hi, cfg.engine.nx);
  const auto u = profile_on_x_grid(data, cfg.engine.t, x, profile_opts(cfg.engine));
  {
    Out f(cfg, "soliton_profile.txt");
    f.line("# engine profile at t = " + fmt17(cfg.engine.t));
    f.line("# columns: x u");
    for (size_t i = 0; i < x.size(); ++i) f.line(row({x[i], u[i]}));
  }
  {
    const SolitonState st = assemble_and_solve(data, 0.0, cfg.engine.t);
    Out f(cfg, "soliton_report.txt");
    f.line("# engine diagnostics at y = 0");
    f.kv("poles", static_cast<double>(data.N));
    f.kv("residue_defect", residue_check(st, data));
    f.kv("cond", st.cond);
    f.kv("u_r", st.u_r);
    f.kv("c_plus", st.c_plus);
    f.kv("x_of_y0", st.x_of_y);
    f.kv("dual_gap", st.dual_gap);
  }
}

void cmd_predict(const ExperimentConfig& cfg) {
  ensure_outdir(cfg.outdir);
  const PhaseContext ctx = make_ctx(cfg);
  const ScatteringData sd = scattering_from_cfg(cfg);
  const auto x = linspace(cfg.engine.x_lo, cfg.engine.x_hi, cfg.engine.nx);
  const Prediction pred = predict(sd, ctx, cfg.engine.t, x,
                                  profile_opts(cfg.engine), cfg.ctx.rho);
  {
    Out f(cfg, "predict_profile.txt");
    f.line("# predicted field at t = " + fmt17(cfg.engine.t));
    f.line("# columns: x u_pred");
    for (size_t i = 0; i < x.size(); ++i) f.line(row({x[i], pred.u_pred[i]}));
  }
  {
    Out f(cfg, "predict_report.txt");
    f.line("# long-time prediction diagnostics");
    f.kv("T_i_re", pred.T_i.real());
    f.kv("T_i_im", pred.T_i.imag());
    f.kv("shift", pred.shift);
    f.kv("rho0", pred.rho0);
    f.kv("rho", pred.rho);
    f.kv("error_scale", std::pow(cfg.engine.t, -1.0 + 2.0 * pred.rho));
    std::string idx = "lambda_indices";
    for (int i : pred.lambda_idx) idx += " " + std::to_string(i);
    f.line(idx);
    f.kv("lambda_poles", static_cast<double>(pred.lambda_data.N));
  }
}

void cmd_evolve(const ExperimentConfig& cfg) {
  ensure_outdir(cfg.outdir);
  const double t0 = cfg.profile.kind == "solitons" ? cfg.engine.t : 0.0;
  FieldGrid g = initial_grid(cfg, t0);
  const int nseg = cfg.pde.n_segments;
  const int total_steps = static_cast<int>(std::lround(cfg.pde.t_end / cfg.pde.dt));
  if (std::abs(total_steps * cfg.pde.dt - cfg.pde.t_end) > 1e-9)
    throw ConfigError("pde: t_end must be a multiple of dt");
  EvolveDiag diag;
  double mass_drift = 0.0;
  {
    Out f(cfg, "evolve_series.txt");
    f.line("# columns: t umax int_m");
    auto emit = [&](double t) {
      double umax = 0.0, mass = 0.0;
      for (double v : g.u) umax = std::max(umax, std::abs(v));
      for (double v : g.m) mass += v;
      mass *= g.L / g.n;
      f.line(row({t, umax, mass}));
    };
    emit(t0);
    int done = 0;
    for (int s = 0; s < nseg; ++s) {
      const int steps = (total_steps * (s + 1)) / nseg - done;
      if (steps == 0) continue;
      g = evolve(g, steps * cfg.pde.dt, cfg.pde.dt, {}, &diag);
      done += steps;
      mass_drift = std::max(mass_drift, diag.mass_drift_rel);
      emit(t0 + done * cfg.pde.dt);
    }
  }
  // two extra steps give the three slices for the equation residual
  std::vector<std::vector<double>> slices{g.u};
  FieldGrid gx = g;
  for (int s = 0; s < 2; ++s) {
    gx = evolve(gx, cfg.pde.dt, cfg.pde.dt);
    slices.push_back(gx.u);
  }
  const double residual = pde_residual(slices, cfg.pde.dt, cfg.pde.L);
  {
    Out f(cfg, "evolve_field.txt");
    f.line("# evolved field at t = " + fmt17(t0 + cfg.pde.t_end));
    f.line("# columns: x u m");
    for (int j = 0; j < g.n; ++j) f.line(row({g.x[j], g.u[j], g.m[j]}));
  }
  {
    Out f(cfg, "evolve_meta.txt");
    f.line("# evolution metadata");
    f.kv("L", cfg.pde.L);
    f.kv("n", static_cast<double>(cfg.pde.n));
    f.kv("dt", cfg.pde.dt);
    f.kv("t_start", t0);
    f.kv("t_end", t0 + cfg.pde.t_end);
    f.kv("steps", static_cast<double>(total_steps));
    f.kv("mass_drift_rel", mass_drift);
    f.kv("umax", diag.umax);
    f.kv("residual", residual);
  }
}

void cmd_compare(const ExperimentConfig& cfg) {
  ensure_outdir(cfg.outdir);
  const auto gens = require_generators(cfg, "compare");
  const PhaseContext ctx = make_ctx(cfg);
  ScatteringData sd;
  sd.spectrum.generators = as_points(gens);
  FieldGrid g = initial_grid(cfg, 0.0);
  std::vector<std::pair<double, double>> errs;
  double t_prev = 0.0;
  Out f(cfg, "compare.txt");
  f.line("# prediction vs evolution; window |x - xi t| <= " +
         fmt17(cfg.compare.window));
  f.line("# columns: t max_err error_scale");
  for (double t : cfg.compare.times) {
    g = evolve(g, checked_segment(t_prev, t, cfg.pde.dt), cfg.pde.dt);
    t_prev = t;
    std::vector<double> xw;
    std::vector<int> jw;
    for (int j = 0; j < g.n; ++j)
      if (std::abs(g.x[j] - ctx.xi * t) <= cfg.compare.window) {
        xw.push_back(g.x[j]);
        jw.push_back(j);
      }
    if (xw.empty())
      throw ConfigError("compare: error window left the periodic domain");
    const Prediction pred =
        predict(sd, ctx, t, xw, profile_opts(cfg.engine), cfg.ctx.rho);
    double err = 0.0;
    for (size_t i = 0; i < xw.size(); ++i)
      err = std::max(err, std::abs(g.u[jw[i]] - pred.u_pred[i]));
    errs.push_back({t, err});
    f.line(row({t, err, std::pow(t, -1.0 + 2.0 * cfg.ctx.rho)}));
    std::ostringstream name;
    name << "compare_t" << t << ".txt";
    Out ft(cfg, name.str());
    ft.line("# columns: x u_pred u_num");
    for (size_t i = 0; i < xw.size(); ++i)
      ft.line(row({xw[i], pred.u_pred[i], g.u[jw[i]]}));
  }
  if (errs.size() >= 3)
    f.kv("decay_exponent", decay_exponent_fit(errs));
}

void cmd_sectors(const ExperimentConfig& cfg) {
  ensure_outdir(cfg.outdir);
  const PhaseContext ctx = make_ctx(cfg);
  const SectorReport rep =
      check_sector_bound(ctx, cfg.sectors.phi, cfg.sectors.samples, cfg.seed);
  Out f(cfg, "sectors_report.txt");
  f.line("# phase-sign sector certification");
  f.kv("regime", ctx.regime == Regime::Left ? "left" : "right");
  f.kv("xi", ctx.xi);
  f.kv("delta0", ctx.delta0);
  f.kv("phi", cfg.sectors.phi);
  f.kv("samples", static_cast<double>(cfg.sectors.samples));
  f.kv("seed", static_cast<double>(cfg.seed));
  f.kv("violations", static_cast<double>(rep.violations));
  f.kv("margin", rep.margin);
}

int run_command(const std::string& verb, const ExperimentConfig& cfg) {
  if (verb == "scatter")
    cmd_scatter(cfg);
  else if (verb == "partition")
    cmd_partition(cfg);
  else if (verb == "solitons")
    cmd_solitons(cfg);
  else if (verb == "predict")
    cmd_predict(cfg);
  else if (verb == "evolve")
    cmd_evolve(cfg);
  else if (verb == "compare")
    cmd_compare(cfg);
  else if (verb == "sectors")
    cmd_sectors(cfg);
  else
    throw ConfigError("unknown verb: " + verb);
  return 0;
}

}  // namespace mch
