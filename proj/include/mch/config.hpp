#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "mch/common.hpp"
#include "mch/phase.hpp"
#include "mch/soliton.hpp"

namespace mch {

struct ProfileCfg {
  std::string kind = "gaussian";  // gaussian | zero | file | solitons
  double A = 0.5, w = 1.0;        // gaussian shape
  double X = 12.0, h = 0.01;      // sampling window and step
  double trunc_tol = 1e-12;
  std::string path;                    // kind = file
  std::vector<Generator> generators;   // kind = solitons
};

struct CtxCfg {
  double xi = -1.0, delta0 = 0.05, rho = 0.2;
};

struct ScatterCfg {
  double zmin = 0.05;
  int n_half = 100;
  double ode_rel_tol = 1e-11, ode_abs_tol = 1e-13;
  double a_min = 0.05;
};

struct LocateCfg {
  bool enabled = false;
  Rect rect{0.1, 4.0, 0.05, 4.0};
  double ode_rel_tol = 1e-12, ode_abs_tol = 1e-14;
  double snap_tol = 1e-3;  // recovered poles this close to |z| = 1 snap on
};

struct EngineCfg {
  double t = 0.0;
  double x_lo = -30.0, x_hi = 30.0;
  int nx = 2048;
  double ywin = 60.0, gamma_cap = 1e9, tail_tol = 1e-8, sweep_step = 0.01;
};

struct PdeCfg {
  double L = 90.0;
  int n = 2048;
  double dt = 0.005;
  double t_end = 10.0;
  int n_segments = 10;     // diagnostics cadence
  double seam_tol = 1e-8;  // max |u|, |m| allowed at the periodic seam
};

struct CompareCfg {
  std::vector<double> times{20.0, 40.0, 80.0};
  double window = 10.0;  // half-width of the xi*t-centered error window
};

struct SectorsCfg {
  // aperture; must satisfy cos 2phi >= 2/xi on the right band, and stay below
  // ~0.11 rad for the left bound to hold at the band edge xi = -1/4 - delta0
  double phi = pi / 32;
  long samples = 100000;
};

struct ExperimentConfig {
  std::string schema;  // must be "mch-lab/1"
  std::uint64_t seed = 1;
  std::string outdir = "out";
  bool quiet = false;
  ProfileCfg profile;
  CtxCfg ctx;
  ScatterCfg scattering;
  LocateCfg locate;
  EngineCfg engine;
  PdeCfg pde;
  CompareCfg compare;
  SectorsCfg sectors;
};

// strict parse: versioned schema, unknown keys rejected at every level,
// tolerances and grids validated
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace mch
