#include "mch/pde.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>

namespace mch {

namespace {

// real transform pair for one fixed n; plans use FFTW_ESTIMATE so repeated
// runs are bit-identical (measured planning picks layout-dependent kernels)
class RealFft {
 public:
  explicit RealFft(int n) : n_(n) {
    buf_r_ = fftw_alloc_real(n);
    buf_c_ = fftw_alloc_complex(n / 2 + 1);
    fwd_ = fftw_plan_dft_r2c_1d(n, buf_r_, buf_c_, FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_c2r_1d(n, buf_c_, buf_r_, FFTW_ESTIMATE);
  }
  ~RealFft() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(inv_);
    fftw_free(buf_r_);
    fftw_free(buf_c_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  // forward with 1/n scaling: out holds spectral coefficients
  std::vector<cplx> forward(const std::vector<double>& in) {
    std::copy(in.begin(), in.end(), buf_r_);
    fftw_execute(fwd_);
    std::vector<cplx> out(n_ / 2 + 1);
    for (int j = 0; j <= n_ / 2; ++j)
      out[j] = cplx(buf_c_[j][0], buf_c_[j][1]) / double(n_);
    return out;
  }
  std::vector<double> inverse(const std::vector<cplx>& in) {
    for (int j = 0; j <= n_ / 2; ++j) {
      buf_c_[j][0] = in[j].real();
      buf_c_[j][1] = in[j].imag();
    }
    fftw_execute(inv_);
    return std::vector<double>(buf_r_, buf_r_ + n_);
  }

 private:
  int n_;
  double* buf_r_;
  fftw_complex* buf_c_;
  fftw_plan fwd_, inv_;
};

struct Spectral {
  RealFft fft;
  int n;
  double L;
  std::vector<double> k;    // 2 pi j / L
  std::vector<cplx> deriv;  // i k, Nyquist zeroed
  std::vector<double> helm; // 1 + k^2

  Spectral(double Ld, int nd) : fft(nd), n(nd), L(Ld) {
    const int nc = n / 2 + 1;
    k.resize(nc);
    deriv.resize(nc);
    helm.resize(nc);
    for (int j = 0; j < nc; ++j) {
      k[j] = 2.0 * pi * j / L;
      deriv[j] = (j == n / 2) ? cplx(0.0) : I * k[j];
      helm[j] = 1.0 + k[j] * k[j];
    }
  }

  // dm/dt spectrum: -ik dealias(fft(m (u^2 - u_x^2))) - 2 ik u_hat
  std::vector<cplx> rhs(const std::vector<cplx>& mh) {
    const int nc = n / 2 + 1;
    std::vector<cplx> uh(nc), uxh(nc);
    for (int j = 0; j < nc; ++j) {
      uh[j] = mh[j] / helm[j];
      uxh[j] = deriv[j] * uh[j];
    }
    const std::vector<double> u = fft.inverse(uh);
    const std::vector<double> ux = fft.inverse(uxh);
    const std::vector<double> m = fft.inverse(mh);
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = m[i] * (u[i] * u[i] - ux[i] * ux[i]);
    std::vector<cplx> wh = fft.forward(w);
    for (int j = 0; j < nc; ++j)
      if (3 * j > n) wh[j] = 0.0;  // 2/3 rule for the cubic product
    std::vector<cplx> out(nc);
    for (int j = 0; j < nc; ++j)
      out[j] = -deriv[j] * wh[j] - 2.0 * deriv[j] * uh[j];
    return out;
  }
};

}  // namespace

void validate_grid(double L, int n) {
  if (!(L > 0)) throw ConfigError("pde grid: L must be positive");
  if (n < 8 || (n & (n - 1)) != 0)
    throw ConfigError("pde grid: n must be a power of two (>= 8)");
}

FieldGrid make_grid(double L, int n) {
  validate_grid(L, n);
  FieldGrid g;
  g.L = L;
  g.n = n;
  g.x.resize(n);
  for (int j = 0; j < n; ++j) g.x[j] = -L / 2 + L * j / n;
  g.u.assign(n, 0.0);
  g.m.assign(n, 0.0);
  return g;
}

FieldGrid grid_from_u(double L, std::vector<double> u) {
  FieldGrid g = make_grid(L, static_cast<int>(u.size()));
  g.u = std::move(u);
  Spectral sp(L, g.n);
  std::vector<cplx> uh = sp.fft.forward(g.u);
  for (int j = 0; j <= g.n / 2; ++j) uh[j] *= sp.helm[j];
  g.m = sp.fft.inverse(uh);
  return g;
}

FieldGrid grid_from_m(double L, std::vector<double> m) {
  FieldGrid g = make_grid(L, static_cast<int>(m.size()));
  g.m = std::move(m);
  g.u = helmholtz_invert(g.m, L);
  return g;
}

std::vector<double> helmholtz_invert(const std::vector<double>& m, double L) {
  const int n = static_cast<int>(m.size());
  validate_grid(L, n);
  Spectral sp(L, n);
  std::vector<cplx> mh = sp.fft.forward(m);
  for (int j = 0; j <= n / 2; ++j) mh[j] /= sp.helm[j];
  return sp.fft.inverse(mh);
}

std::vector<double> spectral_deriv(const std::vector<double>& f, double L) {
  const int n = static_cast<int>(f.size());
  validate_grid(L, n);
  Spectral sp(L, n);
  std::vector<cplx> fh = sp.fft.forward(f);
  for (int j = 0; j <= n / 2; ++j) fh[j] *= sp.deriv[j];
  return sp.fft.inverse(fh);
}

std::vector<double> pde_rhs(const FieldGrid& g) {
  validate_grid(g.L, g.n);
  Spectral sp(g.L, g.n);
  return sp.fft.inverse(sp.rhs(sp.fft.forward(g.m)));
}

FieldGrid evolve(const FieldGrid& g0, double t_end, double dt,
                 const EvolveOpts& opts, EvolveDiag* diag) {
  validate_grid(g0.L, g0.n);
  if (!(dt > 0)) throw ConfigError("evolve: dt must be positive");
  const double steps_d = t_end / dt;
  const int steps = static_cast<int>(std::lround(steps_d));
  if (std::abs(steps_d - steps) > 1e-9)
    throw ConfigError("evolve: t_end must be a multiple of dt");
  Spectral sp(g0.L, g0.n);
  const int n = g0.n, nc = n / 2 + 1;

  // stability precheck dt <= c h / max|u^2 - u_x^2|
  {
    const std::vector<double> ux = spectral_deriv(g0.u, g0.L);
    double smax = 0.0;
    for (int i = 0; i < n; ++i)
      smax = std::max(smax, std::abs(g0.u[i] * g0.u[i] - ux[i] * ux[i]));
    const double h = g0.L / n;
    if (smax > 0 && dt > opts.cfl_c * h / smax)
      throw ConfigError("evolve: dt above the advective stability bound");
  }

  std::vector<cplx> mh = sp.fft.forward(g0.m);
  const double mass0 = mh[0].real();
  double u0max = 0.0;
  for (double v : g0.u) u0max = std::max(u0max, std::abs(v));
  const double ucap = opts.blowup_factor * std::max(u0max, 1e-12);

  std::vector<cplx> k1, k2, k3, k4, tmp(nc);
  for (int s = 0; s < steps; ++s) {
    k1 = sp.rhs(mh);
    for (int j = 0; j < nc; ++j) tmp[j] = mh[j] + 0.5 * dt * k1[j];
    k2 = sp.rhs(tmp);
    for (int j = 0; j < nc; ++j) tmp[j] = mh[j] + 0.5 * dt * k2[j];
    k3 = sp.rhs(tmp);
    for (int j = 0; j < nc; ++j) tmp[j] = mh[j] + dt * k3[j];
    k4 = sp.rhs(tmp);
    for (int j = 0; j < nc; ++j)
      mh[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    if ((s + 1) % opts.check_every == 0 || s + 1 == steps) {
      std::vector<cplx> uh(nc);
      for (int j = 0; j < nc; ++j) uh[j] = mh[j] / sp.helm[j];
      const std::vector<double> u = sp.fft.inverse(uh);
      double umax = 0.0;
      for (double v : u) umax = std::max(umax, std::abs(v));
      if (umax > ucap || !std::isfinite(umax))
        throw NumericError("evolve: blow-up detected");
    }
  }

  FieldGrid g = make_grid(g0.L, n);
  g.m = sp.fft.inverse(mh);
  std::vector<cplx> uh(nc);
  for (int j = 0; j < nc; ++j) uh[j] = mh[j] / sp.helm[j];
  g.u = sp.fft.inverse(uh);
  if (diag) {
    diag->mass_drift_rel =
        std::abs(mh[0].real() - mass0) / std::max(std::abs(mass0), 1e-12);
    diag->umax = *std::max_element(g.u.begin(), g.u.end(),
                                   [](double a, double b) {
                                     return std::abs(a) < std::abs(b);
                                   });
    diag->steps = steps;
  }
  return g;
}

double pde_residual(const std::vector<std::vector<double>>& u_slices, double dt,
                    double L) {
  if (u_slices.size() < 3)
    throw ConfigError("pde_residual: need at least 3 time slices");
  const int n = static_cast<int>(u_slices.front().size());
  validate_grid(L, n);
  Spectral sp(L, n);
  const int nc = n / 2 + 1;
  auto m_of = [&](const std::vector<double>& u) {
    std::vector<cplx> uh = sp.fft.forward(u);
    for (int j = 0; j < nc; ++j) uh[j] *= sp.helm[j];
    return sp.fft.inverse(uh);
  };
  double num = 0.0, den = 0.0;
  for (size_t c = 1; c + 1 < u_slices.size(); ++c) {
    if (u_slices[c].size() != static_cast<size_t>(n) ||
        u_slices[c + 1].size() != static_cast<size_t>(n))
      throw ConfigError("pde_residual: slice size mismatch");
    const std::vector<double> mp = m_of(u_slices[c + 1]);
    const std::vector<double> mm = m_of(u_slices[c - 1]);
    FieldGrid g = grid_from_u(L, u_slices[c]);
    const std::vector<double> r = pde_rhs(g);
    for (int i = 0; i < n; ++i) {
      const double mt = (mp[i] - mm[i]) / (2.0 * dt);
      num += (mt - r[i]) * (mt - r[i]);
      den += mt * mt;
    }
  }
  if (den < 1e-300) return num < 1e-300 ? 0.0 : std::sqrt(num);
  return std::sqrt(num / den);
}

}  // namespace mch
