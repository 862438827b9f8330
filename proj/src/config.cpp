#include "mch/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace mch {

namespace {

using nlohmann::json;

// reject keys the section does not define; silent typos corrupt experiments
void check_keys(const json& j, const std::string& where,
                const std::set<std::string>& allowed) {
  if (!j.is_object())
    throw ConfigError("config: section '" + where + "' must be an object");
  for (const auto& [key, val] : j.items())
    if (!allowed.count(key))
      throw ConfigError("config: unknown key '" + where + "." + key + "'");
}

double get_num(const json& j, const std::string& where, const char* key,
               double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number())
    throw ConfigError("config: '" + where + "." + key + "' must be a number");
  return j[key].get<double>();
}

long get_int(const json& j, const std::string& where, const char* key,
             long fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer())
    throw ConfigError("config: '" + where + "." + key + "' must be an integer");
  return j[key].get<long>();
}

std::string get_str(const json& j, const std::string& where, const char* key,
                    const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_string())
    throw ConfigError("config: '" + where + "." + key + "' must be a string");
  return j[key].get<std::string>();
}

void require_pos(double v, const std::string& name) {
  if (!(v > 0)) throw ConfigError("config: '" + name + "' must be positive");
}

std::vector<Generator> parse_generators(const json& arr,
                                        const std::string& where) {
  if (!arr.is_array())
    throw ConfigError("config: '" + where + "' must be an array");
  std::vector<Generator> out;
  int idx = 0;
  for (const auto& g : arr) {
    const std::string w = where + "[" + std::to_string(idx++) + "]";
    check_keys(g, w, {"re_zeta", "im_zeta", "re_ct", "im_ct"});
    for (const char* key : {"re_zeta", "im_zeta", "re_ct", "im_ct"})
      if (!g.contains(key))
        throw ConfigError("config: '" + w + "' missing '" + key + "'");
    const cplx zeta(get_num(g, w, "re_zeta", 0), get_num(g, w, "im_zeta", 0));
    const cplx ct(get_num(g, w, "re_ct", 0), get_num(g, w, "im_ct", 0));
    const PoleKind kind = std::abs(std::abs(zeta) - 1.0) <= 1e-8
                              ? PoleKind::OnCircle
                              : PoleKind::OffCircle;
    out.push_back({zeta, ct, kind});
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  check_keys(j, "", {"schema", "seed", "outdir", "profile", "ctx", "scattering",
                     "locate", "engine", "pde", "compare", "sectors"});
  ExperimentConfig cfg;
  cfg.schema = get_str(j, "", "schema", "");
  if (cfg.schema != "mch-lab/1")
    throw ConfigError("config: schema must be \"mch-lab/1\"");
  cfg.seed = static_cast<std::uint64_t>(get_int(j, "", "seed", 1));
  cfg.outdir = get_str(j, "", "outdir", "out");

  if (j.contains("profile")) {
    const json& p = j["profile"];
    check_keys(p, "profile", {"kind", "A", "w", "X", "h", "trunc_tol", "path",
                              "generators"});
    auto& c = cfg.profile;
    c.kind = get_str(p, "profile", "kind", "gaussian");
    if (c.kind != "gaussian" && c.kind != "zero" && c.kind != "file" &&
        c.kind != "solitons")
      throw ConfigError("config: profile.kind must be gaussian|zero|file|solitons");
    c.A = get_num(p, "profile", "A", c.A);
    c.w = get_num(p, "profile", "w", c.w);
    c.X = get_num(p, "profile", "X", c.X);
    c.h = get_num(p, "profile", "h", c.h);
    c.trunc_tol = get_num(p, "profile", "trunc_tol", c.trunc_tol);
    c.path = get_str(p, "profile", "path", "");
    if (p.contains("generators"))
      c.generators = parse_generators(p["generators"], "profile.generators");
    if (c.kind == "file" && c.path.empty())
      throw ConfigError("config: profile.kind=file needs profile.path");
    if (c.kind == "solitons" && c.generators.empty())
      throw ConfigError("config: profile.kind=solitons needs generators");
    require_pos(c.w, "profile.w");
    require_pos(c.X, "profile.X");
    require_pos(c.h, "profile.h");
    require_pos(c.trunc_tol, "profile.trunc_tol");
    if (!(c.h < c.X)) throw ConfigError("config: need profile.h < profile.X");
  }

  if (j.contains("ctx")) {
    const json& p = j["ctx"];
    check_keys(p, "ctx", {"xi", "delta0", "rho"});
    cfg.ctx.xi = get_num(p, "ctx", "xi", cfg.ctx.xi);
    cfg.ctx.delta0 = get_num(p, "ctx", "delta0", cfg.ctx.delta0);
    cfg.ctx.rho = get_num(p, "ctx", "rho", cfg.ctx.rho);
    require_pos(cfg.ctx.delta0, "ctx.delta0");
    if (!(cfg.ctx.rho > 0 && cfg.ctx.rho < 0.25))
      throw ConfigError("config: ctx.rho must lie in (0, 1/4)");
  }

  if (j.contains("scattering")) {
    const json& p = j["scattering"];
    check_keys(p, "scattering",
               {"zmin", "n_half", "ode_rel_tol", "ode_abs_tol", "a_min"});
    auto& c = cfg.scattering;
    c.zmin = get_num(p, "scattering", "zmin", c.zmin);
    c.n_half = static_cast<int>(get_int(p, "scattering", "n_half", c.n_half));
    c.ode_rel_tol = get_num(p, "scattering", "ode_rel_tol", c.ode_rel_tol);
    c.ode_abs_tol = get_num(p, "scattering", "ode_abs_tol", c.ode_abs_tol);
    c.a_min = get_num(p, "scattering", "a_min", c.a_min);
    if (!(c.zmin > 0 && c.zmin < 1))
      throw ConfigError("config: scattering.zmin must lie in (0, 1)");
    if (c.n_half < 4) throw ConfigError("config: scattering.n_half too small");
    require_pos(c.ode_rel_tol, "scattering.ode_rel_tol");
    require_pos(c.ode_abs_tol, "scattering.ode_abs_tol");
    require_pos(c.a_min, "scattering.a_min");
  }

  if (j.contains("locate")) {
    const json& p = j["locate"];
    check_keys(p, "locate", {"enabled", "re_lo", "re_hi", "im_lo", "im_hi",
                             "ode_rel_tol", "ode_abs_tol", "snap_tol"});
    auto& c = cfg.locate;
    if (p.contains("enabled")) {
      if (!p["enabled"].is_boolean())
        throw ConfigError("config: 'locate.enabled' must be a boolean");
      c.enabled = p["enabled"].get<bool>();
    }
    c.rect.re_lo = get_num(p, "locate", "re_lo", c.rect.re_lo);
    c.rect.re_hi = get_num(p, "locate", "re_hi", c.rect.re_hi);
    c.rect.im_lo = get_num(p, "locate", "im_lo", c.rect.im_lo);
    c.rect.im_hi = get_num(p, "locate", "im_hi", c.rect.im_hi);
    c.ode_rel_tol = get_num(p, "locate", "ode_rel_tol", c.ode_rel_tol);
    c.ode_abs_tol = get_num(p, "locate", "ode_abs_tol", c.ode_abs_tol);
    c.snap_tol = get_num(p, "locate", "snap_tol", c.snap_tol);
    if (!(c.rect.re_lo < c.rect.re_hi && c.rect.im_lo < c.rect.im_hi))
      throw ConfigError("config: locate rectangle is empty");
    require_pos(c.ode_rel_tol, "locate.ode_rel_tol");
    require_pos(c.ode_abs_tol, "locate.ode_abs_tol");
    require_pos(c.snap_tol, "locate.snap_tol");
  }

  if (j.contains("engine")) {
    const json& p = j["engine"];
    check_keys(p, "engine", {"t", "x_lo", "x_hi", "nx", "ywin", "gamma_cap",
                             "tail_tol", "sweep_step"});
    auto& c = cfg.engine;
    c.t = get_num(p, "engine", "t", c.t);
    c.x_lo = get_num(p, "engine", "x_lo", c.x_lo);
    c.x_hi = get_num(p, "engine", "x_hi", c.x_hi);
    c.nx = static_cast<int>(get_int(p, "engine", "nx", c.nx));
    c.ywin = get_num(p, "engine", "ywin", c.ywin);
    c.gamma_cap = get_num(p, "engine", "gamma_cap", c.gamma_cap);
    c.tail_tol = get_num(p, "engine", "tail_tol", c.tail_tol);
    c.sweep_step = get_num(p, "engine", "sweep_step", c.sweep_step);
    if (!(c.x_lo < c.x_hi)) throw ConfigError("config: engine x-range empty");
    if (c.nx < 2) throw ConfigError("config: engine.nx too small");
    require_pos(c.ywin, "engine.ywin");
    require_pos(c.gamma_cap, "engine.gamma_cap");
    require_pos(c.tail_tol, "engine.tail_tol");
    require_pos(c.sweep_step, "engine.sweep_step");
  }

  if (j.contains("pde")) {
    const json& p = j["pde"];
    check_keys(p, "pde", {"L", "n", "dt", "t_end", "n_segments", "seam_tol"});
    auto& c = cfg.pde;
    c.L = get_num(p, "pde", "L", c.L);
    c.n = static_cast<int>(get_int(p, "pde", "n", c.n));
    c.dt = get_num(p, "pde", "dt", c.dt);
    c.t_end = get_num(p, "pde", "t_end", c.t_end);
    c.n_segments = static_cast<int>(get_int(p, "pde", "n_segments", c.n_segments));
    c.seam_tol = get_num(p, "pde", "seam_tol", c.seam_tol);
    require_pos(c.L, "pde.L");
    require_pos(c.dt, "pde.dt");
    require_pos(c.t_end, "pde.t_end");
    require_pos(c.seam_tol, "pde.seam_tol");
    if (c.n < 8 || (c.n & (c.n - 1)) != 0)
      throw ConfigError("config: pde.n must be a power of two (>= 8)");
    if (c.n_segments < 1) throw ConfigError("config: pde.n_segments < 1");
  }

  if (j.contains("compare")) {
    const json& p = j["compare"];
    check_keys(p, "compare", {"times", "window"});
    auto& c = cfg.compare;
    if (p.contains("times")) {
      if (!p["times"].is_array())
        throw ConfigError("config: 'compare.times' must be an array");
      c.times.clear();
      for (const auto& v : p["times"]) {
        if (!v.is_number())
          throw ConfigError("config: 'compare.times' entries must be numbers");
        c.times.push_back(v.get<double>());
      }
      if (c.times.size() < 1)
        throw ConfigError("config: 'compare.times' is empty");
      for (size_t i = 0; i < c.times.size(); ++i) {
        require_pos(c.times[i], "compare.times");
        if (i > 0 && !(c.times[i] > c.times[i - 1]))
          throw ConfigError("config: 'compare.times' must increase");
      }
    }
    c.window = get_num(p, "compare", "window", c.window);
    require_pos(c.window, "compare.window");
  }

  if (j.contains("sectors")) {
    const json& p = j["sectors"];
    check_keys(p, "sectors", {"phi", "samples"});
    cfg.sectors.phi = get_num(p, "sectors", "phi", cfg.sectors.phi);
    cfg.sectors.samples = get_int(p, "sectors", "samples", cfg.sectors.samples);
    require_pos(cfg.sectors.phi, "sectors.phi");
    if (cfg.sectors.samples < 1)
      throw ConfigError("config: sectors.samples < 1");
  }

  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace mch
