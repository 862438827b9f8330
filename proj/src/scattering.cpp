#include "mch/scattering.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_odeiv2.h>

#include <algorithm>
#include <cmath>

namespace mch {

// ---------------------------------------------------------------- profiles

InitialProfile InitialProfile::gaussian(double A, double w, double X, double h) {
  InitialProfile pr;
  const int n = static_cast<int>(std::round(2 * X / h)) + 1;
  pr.x_ = linspace(-X, X, n);
  pr.m_.resize(n);
  for (int i = 0; i < n; ++i) {
    const double t = pr.x_[i] / w;
    pr.m_[i] = A * std::exp(-t * t);
  }
  pr.finish(1e-12);
  return pr;
}

InitialProfile InitialProfile::zero(double X, double h) {
  InitialProfile pr;
  const int n = static_cast<int>(std::round(2 * X / h)) + 1;
  pr.x_ = linspace(-X, X, n);
  pr.m_.assign(n, 0.0);
  pr.finish(1e-12);
  return pr;
}

InitialProfile InitialProfile::from_samples(std::vector<double> x,
                                            std::vector<double> m,
                                            double trunc_tol) {
  if (x.size() != m.size() || x.size() < 8)
    throw ConfigError("profile: need matching sample arrays (>= 8 nodes)");
  const double h = x[1] - x[0];
  for (size_t i = 0; i + 1 < x.size(); ++i)
    if (std::abs((x[i + 1] - x[i]) - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw ConfigError("profile: sample grid must be uniform");
  InitialProfile pr;
  pr.x_ = std::move(x);
  pr.m_ = std::move(m);
  pr.finish(trunc_tol);
  return pr;
}

void InitialProfile::finish(double trunc_tol) {
  X_ = x_.back();
  h_ = x_[1] - x_[0];
  if (std::abs(x_.front() + X_) > 1e-9)
    throw ConfigError("profile: grid must be symmetric about 0");
  if (std::abs(m_.front()) > trunc_tol || std::abs(m_.back()) > trunc_tol)
    throw ConfigError("profile: |m| at the grid ends exceeds the truncation tolerance");
  zero_ = true;
  for (double v : m_)
    if (v != 0.0) {
      zero_ = false;
      break;
    }
  m_sp_ = CubicSpline(x_, m_);
  std::vector<double> qm1(x_.size());
  for (size_t i = 0; i < x_.size(); ++i)
    qm1[i] = std::sqrt(m_[i] * m_[i] + 1.0) - 1.0;
  qm1_cum_ = CubicSpline(x_, qm1);
  qm1_total_ = qm1_cum_.integral();
}

double InitialProfile::p(double x) const {
  if (x <= -X_) return x - qm1_total_;
  if (x >= X_) return x;
  return x - (qm1_total_ - qm1_cum_.integral_from_start(x));
}

// ---------------------------------------------------------------- Jost ODE

namespace {

struct RhsCtx {
  const InitialProfile* pr;
  cplx z;
  int column;  // 0: full 2x2 system; 1: [mu-]_1 with sigma3-1; 2: [mu+]_2 with sigma3+1
};

// entries of P(x; z): P00 = -i m^2/(2 z q), P11 = -P00,
// P01 = i mx/(2 q^2) + m/(2 z q), P10 = i mx/(2 q^2) - m/(2 z q)
inline void p_entries(const InitialProfile& pr, cplx z, double x, cplx& p00,
                      cplx& p01, cplx& p10, cplx& p11) {
  const double m = pr.m(x), mx = pr.mx(x);
  const double q = std::sqrt(m * m + 1.0);
  const cplx off = I * mx / (2 * q * q);
  const cplx s = m / (2.0 * z * q);
  p00 = -I * m * m / (2.0 * z * q);
  p11 = -p00;
  p01 = off + s;
  p10 = off - s;
}

int rhs_full(double x, const double y[], double dy[], void* params) {
  const RhsCtx& c = *static_cast<RhsCtx*>(params);
  cplx p00, p01, p10, p11;
  p_entries(*c.pr, c.z, x, p00, p01, p10, p11);
  const cplx cc = -0.25 * I * (c.z - 1.0 / c.z) * (*c.pr).q(x);
  const cplx m00{y[0], y[4]}, m01{y[1], y[5]}, m10{y[2], y[6]}, m11{y[3], y[7]};
  // [sigma3, mu] = [[0, 2 mu01], [-2 mu10, 0]]
  const cplx d00 = p00 * m00 + p01 * m10;
  const cplx d01 = 2.0 * cc * m01 + p00 * m01 + p01 * m11;
  const cplx d10 = -2.0 * cc * m10 + p10 * m00 + p11 * m10;
  const cplx d11 = p10 * m01 + p11 * m11;
  dy[0] = d00.real();
  dy[1] = d01.real();
  dy[2] = d10.real();
  dy[3] = d11.real();
  dy[4] = d00.imag();
  dy[5] = d01.imag();
  dy[6] = d10.imag();
  dy[7] = d11.imag();
  return GSL_SUCCESS;
}

int rhs_column(double x, const double y[], double dy[], void* params) {
  const RhsCtx& c = *static_cast<RhsCtx*>(params);
  cplx p00, p01, p10, p11;
  p_entries(*c.pr, c.z, x, p00, p01, p10, p11);
  const cplx cc = -0.25 * I * (c.z - 1.0 / c.z) * (*c.pr).q(x);
  const cplx v0{y[0], y[2]}, v1{y[1], y[3]};
  cplx d0, d1;
  if (c.column == 1) {  // generator c(sigma3 - 1) + P: diag(0, -2c)
    d0 = p00 * v0 + p01 * v1;
    d1 = (-2.0 * cc + p11) * v1 + p10 * v0;
  } else {  // c(sigma3 + 1) + P: diag(2c, 0)
    d0 = (2.0 * cc + p00) * v0 + p01 * v1;
    d1 = p10 * v0 + p11 * v1;
  }
  dy[0] = d0.real();
  dy[1] = d1.real();
  dy[2] = d0.imag();
  dy[3] = d1.imag();
  return GSL_SUCCESS;
}

void integrate(RhsCtx& ctx, int dim, double x_from, double x_to, double* y,
               const OdeOpts& opts) {
  gsl_odeiv2_system sys{ctx.column == 0 ? rhs_full : rhs_column, nullptr,
                        static_cast<size_t>(dim), &ctx};
  const double h0 = (x_to > x_from ? 1.0 : -1.0) * 1e-3;
  gsl_odeiv2_driver* drv = gsl_odeiv2_driver_alloc_y_new(
      &sys, gsl_odeiv2_step_rk8pd, h0, opts.abs_tol, opts.rel_tol);
  double x = x_from;
  const int status = gsl_odeiv2_driver_apply(drv, &x, x_to, y);
  gsl_odeiv2_driver_free(drv);
  if (status != GSL_SUCCESS)
    throw NumericError("jost: ODE integration failed (status " +
                       std::to_string(status) + ")");
}

}  // namespace

Mat2 jost_at(const InitialProfile& pr, cplx z, int side, double x_stop,
             const OdeOpts& opts) {
  if (z == cplx(0.0)) throw NumericError("jost: z = 0");
  if (side != -1 && side != 1) throw ConfigError("jost: side must be -1 or +1");
  if (pr.is_zero()) return {1.0, 0.0, 0.0, 1.0};
  RhsCtx ctx{&pr, z, 0};
  double y[8] = {1, 0, 0, 1, 0, 0, 0, 0};  // identity
  integrate(ctx, 8, side * pr.X(), x_stop, y, opts);
  Mat2 mu{{y[0], y[4]}, {y[1], y[5]}, {y[2], y[6]}, {y[3], y[7]}};
  if (std::abs(mu.det() - 1.0) > 1e-6)
    throw NumericError("jost: determinant drifted from 1");
  return mu;
}

namespace {
// analytic column solves: [mu-]_1 from -X, [mu+]_2 from +X
void jost_columns(const InitialProfile& pr, cplx z, double x_stop,
                  const OdeOpts& opts, cplx v[2], cplx w[2]) {
  if (pr.is_zero()) {
    v[0] = 1;
    v[1] = 0;
    w[0] = 0;
    w[1] = 1;
    return;
  }
  RhsCtx c1{&pr, z, 1};
  double y1[4] = {1, 0, 0, 0};
  integrate(c1, 4, -pr.X(), x_stop, y1, opts);
  v[0] = {y1[0], y1[2]};
  v[1] = {y1[1], y1[3]};
  RhsCtx c2{&pr, z, 2};
  double y2[4] = {0, 1, 0, 0};
  integrate(c2, 4, pr.X(), x_stop, y2, opts);
  w[0] = {y2[0], y2[2]};
  w[1] = {y2[1], y2[3]};
}
}  // namespace

std::pair<cplx, cplx> scattering_coefficients(const InitialProfile& pr,
                                              double z, double x0,
                                              const OdeOpts& opts) {
  if (z == 0.0) throw NumericError("scattering_coefficients: z = 0");
  const Mat2 mm = jost_at(pr, z, -1, x0, opts);
  const Mat2 mp = jost_at(pr, z, +1, x0, opts);
  const cplx a =
      mm.a00 * std::conj(mp.a00) + mm.a10 * std::conj(mp.a10);
  const cplx btil = mp.a00 * mm.a10 - mp.a10 * mm.a00;
  const cplx b = btil * std::exp(-k_of(z) * pr.p(x0));
  return {a, b};
}

cplx a_upper_half(const InitialProfile& pr, cplx z, double x_stop,
                  const OdeOpts& opts) {
  if (!(z.imag() > 0)) throw ConfigError("a_upper_half: need Im z > 0");
  cplx v[2], w[2];
  jost_columns(pr, z, x_stop, opts, v, w);
  return v[0] * w[1] - v[1] * w[0];
}

std::vector<double> make_z_grid(double zmin, int n_half) {
  if (!(zmin > 0 && zmin < 1) || n_half < 4)
    throw ConfigError("make_z_grid: need 0 < zmin < 1 and n_half >= 4");
  // n_half log-uniform moduli on [zmin, 1/zmin], reciprocal-symmetric by
  // construction: the upper half mirrors the lower half exactly.
  std::vector<double> mods(n_half);
  const double llo = std::log(zmin);
  for (int j = 0; j < n_half / 2; ++j) {
    const double l = llo - 2.0 * llo * j / (n_half - 1);
    mods[j] = std::exp(l);
    mods[n_half - 1 - j] = 1.0 / mods[j];
  }
  if (n_half % 2) mods[n_half / 2] = 1.0;
  std::vector<double> grid(2 * n_half);
  for (int j = 0; j < n_half; ++j) {
    grid[n_half + j] = mods[j];
    grid[n_half - 1 - j] = -mods[j];
  }
  return grid;
}

ScatteringData reflection_grid(const InitialProfile& pr,
                               const std::vector<double>& z_grid,
                               const OdeOpts& opts, double a_min) {
  ScatteringData sd;
  sd.z_grid = z_grid;
  const int n = static_cast<int>(z_grid.size());
  sd.r.resize(n);
  sd.a.resize(n);
  sd.b.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto [a, b] = scattering_coefficients(pr, z_grid[i], 0.0, opts);
    if (std::abs(a) < a_min)
      throw NumericError("reflection_grid: |a| too small (spectral singularity?)");
    sd.a[i] = a;
    sd.b[i] = b;
    sd.r[i] = b / a;
    const double unit = std::abs(std::norm(a) + std::norm(b) - 1.0);
    sd.unitarity_defect = std::max(sd.unitarity_defect, unit);
  }
  // defects against the exact grid symmetries
  for (int i = 0; i < n; ++i) {
    const double z = z_grid[i];
    // reciprocal partner: grid is two symmetric halves
    const int half = n / 2;
    const int j = z > 0 ? half + (n - 1 - (i - half) - half)  // reflect in half
                        : -1;
    if (z > 0 && j >= half && j < n) {
      const double zr = z_grid[j];
      if (std::abs(zr * z - 1.0) < 1e-9)
        sd.sym_recip_defect = std::max(
            sd.sym_recip_defect, std::abs(sd.r[i] - std::conj(sd.r[j])));
    }
    const int jn = n - 1 - i;  // negation partner
    sd.sym_neg_defect =
        std::max(sd.sym_neg_defect, std::abs(sd.r[i] + std::conj(sd.r[jn])));
  }
  const int half = n / 2;
  sd.r_near_zero = std::max(std::abs(sd.r[half - 1]), std::abs(sd.r[half]));
  sd.a_at_i = a_upper_half(pr, I, 0.0, opts);
  return sd;
}

// -------------------------------------------------------- trace machinery

namespace {
std::pair<std::vector<double>, std::vector<double>> log_gain(
    const std::vector<double>& z_grid, const std::vector<cplx>& r) {
  std::vector<double> g(z_grid.size());
  for (size_t i = 0; i < r.size(); ++i) g[i] = std::log1p(std::norm(r[i]));
  return {z_grid, g};
}
}  // namespace

cplx trace_formula_a(const std::vector<double>& z_grid,
                     const std::vector<cplx>& r, const DiscreteSpectrum& spec,
                     cplx z, double quad_gap) {
  cplx prod = 1.0;
  for (const auto& sp : spec.expanded)
    prod *= (z - sp.zeta) / (z - std::conj(sp.zeta));
  bool r_zero = true;
  for (const auto& ri : r)
    if (std::abs(ri) > 1e-14) {
      r_zero = false;
      break;
    }
  if (r_zero || r.empty()) return prod;
  if (std::abs(z.imag()) < quad_gap)
    throw NumericError("trace_formula_a: z too close to the real axis");
  auto [nodes, g] = log_gain(z_grid, r);
  const cplx integral = cauchy_integral(nodes, g, z, 1);
  return prod * std::exp(-integral / (2.0 * pi * I));
}

double moment_zero_check(const std::vector<double>& z_grid,
                         const std::vector<cplx>& r) {
  bool r_zero = true;
  for (const auto& ri : r)
    if (std::abs(ri) > 1e-14) {
      r_zero = false;
      break;
    }
  if (r_zero || r.empty()) return 0.0;
  auto [nodes, g] = log_gain(z_grid, r);
  const cplx pv = cauchy_integral(nodes, g, cplx(0.0), 1);
  return std::abs(pv / (2.0 * pi * I));
}

// ---------------------------------------------------------- zero location

namespace {

cplx a_prime(const InitialProfile& pr, cplx z, const OdeOpts& opts,
             double h = 1e-4) {
  // 4-point central stencil; a is analytic so the real-direction stencil serves
  const cplx f1 = a_upper_half(pr, z + h, 0.0, opts);
  const cplx f2 = a_upper_half(pr, z - h, 0.0, opts);
  const cplx f3 = a_upper_half(pr, z + 2 * h, 0.0, opts);
  const cplx f4 = a_upper_half(pr, z - 2 * h, 0.0, opts);
  return (8.0 * (f1 - f2) - (f3 - f4)) / (12.0 * h);
}

// winding number of a along the rectangle boundary, adaptive phase tracking
long winding_number(const InitialProfile& pr, const Rect& rc,
                    const OdeOpts& opts) {
  std::vector<cplx> corners = {{rc.re_lo, rc.im_lo},
                               {rc.re_hi, rc.im_lo},
                               {rc.re_hi, rc.im_hi},
                               {rc.re_lo, rc.im_hi},
                               {rc.re_lo, rc.im_lo}};
  double total = 0.0;
  for (int side = 0; side < 4; ++side) {
    const cplx za = corners[side], zb = corners[side + 1];
    // adaptive subdivision: refine until each phase step < pi/2
    struct Seg {
      cplx z0, z1;
      cplx f0, f1;
      int depth;
    };
    std::vector<Seg> stack;
    const int n0 = 16;
    std::vector<cplx> fs(n0 + 1);
    for (int i = 0; i <= n0; ++i)
      fs[i] = a_upper_half(pr, za + (zb - za) * (double(i) / n0), 0.0, opts);
    for (int i = n0 - 1; i >= 0; --i)
      stack.push_back({za + (zb - za) * (double(i) / n0),
                       za + (zb - za) * (double(i + 1) / n0), fs[i], fs[i + 1],
                       0});
    while (!stack.empty()) {
      Seg s = stack.back();
      stack.pop_back();
      if (std::abs(s.f0) < 1e-12 || std::abs(s.f1) < 1e-12)
        throw NumericError("locate_zeros: zero of a on the region boundary");
      const double dphi = std::arg(s.f1 / s.f0);
      if (std::abs(dphi) < pi / 2) {
        total += dphi;
      } else if (s.depth >= 24) {
        throw NumericError("locate_zeros: boundary phase tracking failed");
      } else {
        const cplx zm = 0.5 * (s.z0 + s.z1);
        const cplx fm = a_upper_half(pr, zm, 0.0, opts);
        stack.push_back({zm, s.z1, fm, s.f1, s.depth + 1});
        stack.push_back({s.z0, zm, s.f0, fm, s.depth + 1});
      }
    }
  }
  return std::lround(total / (2 * pi));
}

void collect_zeros(const InitialProfile& pr, const Rect& rc,
                   const OdeOpts& opts, int depth, std::vector<cplx>& out) {
  const long w = winding_number(pr, rc, opts);
  if (w == 0) return;
  if (w == 1) {
    cplx z{0.5 * (rc.re_lo + rc.re_hi), 0.5 * (rc.im_lo + rc.im_hi)};
    for (int it = 0; it < 30; ++it) {
      const cplx f = a_upper_half(pr, z, 0.0, opts);
      const cplx fp = a_prime(pr, z, opts);
      const cplx step = f / fp;
      z -= step;
      if (std::abs(step) < 1e-12) break;
      if (it == 29) throw NumericError("locate_zeros: Newton did not converge");
    }
    if (z.real() < rc.re_lo - 0.1 || z.real() > rc.re_hi + 0.1 ||
        z.imag() < rc.im_lo - 0.1 || z.imag() > rc.im_hi + 0.1)
      throw NumericError("locate_zeros: Newton left the search region");
    out.push_back(z);
    return;
  }
  if (depth > 20) throw NumericError("locate_zeros: subdivision too deep");
  Rect r1 = rc, r2 = rc;
  if (rc.re_hi - rc.re_lo >= rc.im_hi - rc.im_lo) {
    const double mid = 0.5 * (rc.re_lo + rc.re_hi);
    r1.re_hi = mid;
    r2.re_lo = mid;
  } else {
    const double mid = 0.5 * (rc.im_lo + rc.im_hi);
    r1.im_hi = mid;
    r2.im_lo = mid;
  }
  collect_zeros(pr, r1, opts, depth + 1, out);
  collect_zeros(pr, r2, opts, depth + 1, out);
}

}  // namespace

std::vector<SpectralPoint> locate_zeros(const InitialProfile& pr,
                                        const Rect& region, const OdeOpts& opts,
                                        double x0) {
  if (region.im_lo <= 0)
    throw ConfigError("locate_zeros: region must avoid the real axis");
  const long expected = winding_number(pr, region, opts);
  std::vector<cplx> zeros;
  collect_zeros(pr, region, opts, 0, zeros);
  if (static_cast<long>(zeros.size()) != expected)
    throw NumericError("locate_zeros: count/refinement mismatch");
  std::sort(zeros.begin(), zeros.end(),
            [](cplx a, cplx b) { return a.real() < b.real(); });
  std::vector<SpectralPoint> out;
  for (const cplx zeta : zeros) {
    cplx v[2], w[2];
    jost_columns(pr, zeta, x0, opts, v, w);
    // at a zero of a the columns are proportional: b~ = mu-_00 / mu+_01;
    // b~ e^{-k p}/a' is the residue constant -i zeta C, so divide it out to
    // report the generator-level constant
    const cplx btil = v[0] / w[0];
    const cplx C = btil * std::exp(-k_of(zeta) * pr.p(x0)) /
                   a_prime(pr, zeta, opts) / (-I * zeta);
    const PoleKind kind = std::abs(std::abs(zeta) - 1.0) < 1e-3
                              ? PoleKind::OnCircle
                              : PoleKind::OffCircle;
    out.push_back({zeta, C, kind});
  }
  return out;
}

}  // namespace mch
