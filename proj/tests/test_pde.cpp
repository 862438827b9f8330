#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "mch/pde.hpp"

using namespace mch;

namespace {

FieldGrid cos_mode(double L, int n, int mode, double amp) {
  FieldGrid g = make_grid(L, n);
  std::vector<double> u(n);
  for (int j = 0; j < n; ++j)
    u[j] = amp * std::cos(2 * pi * mode * g.x[j] / L);
  return grid_from_u(L, std::move(u));
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double e = 0;
  for (size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS((void)make_grid(10.0, 100), ConfigError);  // not a power of 2
  CHECK_THROWS_AS((void)make_grid(10.0, 4), ConfigError);
  CHECK_THROWS_AS((void)make_grid(-1.0, 64), ConfigError);
  const FieldGrid g = make_grid(10.0, 64);
  CHECK(g.x.front() == -5.0);
  CHECK(std::abs(g.x[1] - g.x[0] - 10.0 / 64) < 1e-15);
}

TEST_CASE("helmholtz inversion") {
  const double L = 20.0;
  const int n = 256;
  const FieldGrid g = make_grid(L, n);
  SUBCASE("single mode") {
    // (1 - d^2/dx^2) u = (1 + k^2) u for u = cos(kx)
    const double k = 2 * pi * 3 / L;
    std::vector<double> m(n), want(n);
    for (int j = 0; j < n; ++j) {
      want[j] = std::cos(k * g.x[j]);
      m[j] = (1 + k * k) * want[j];
    }
    CHECK(max_abs_diff(helmholtz_invert(m, L), want) < 1e-12);
  }
  SUBCASE("constant") {
    std::vector<double> m(n, 3.5);
    const auto u = helmholtz_invert(m, L);
    for (double v : u) CHECK(std::abs(v - 3.5) < 1e-12);
  }
  SUBCASE("round trip through grid_from_u") {
    std::vector<double> u(n);
    for (int j = 0; j < n; ++j)
      u[j] = std::exp(-g.x[j] * g.x[j]);  // smooth, periodic to 1e-44
    const FieldGrid gu = grid_from_u(L, u);
    CHECK(max_abs_diff(helmholtz_invert(gu.m, L), u) < 1e-10);
  }
}

TEST_CASE("spectral derivative") {
  const double L = 14.0;
  const int n = 128;
  const FieldGrid g = make_grid(L, n);
  std::vector<double> f(n), want(n);
  const double k = 2 * pi * 5 / L;
  for (int j = 0; j < n; ++j) {
    f[j] = std::sin(k * g.x[j]);
    want[j] = k * std::cos(k * g.x[j]);
  }
  CHECK(max_abs_diff(spectral_deriv(f, L), want) < 1e-11);
}

TEST_CASE("rhs is a perfect derivative up to the linear term") {
  // -d/dx(...) - 2 u_x integrates to zero over the period
  const FieldGrid g = cos_mode(30.0, 256, 2, 0.4);
  const auto r = pde_rhs(g);
  double mean = 0;
  for (double v : r) mean += v;
  mean /= r.size();
  CHECK(std::abs(mean) < 1e-12);
}

TEST_CASE("linear dispersion relation") {
  // for small amplitude, m_t = -2 u_x: a cosine mode advects with phase
  // velocity 2/(1 + k^2)
  const double L = 40.0;
  const int n = 512;
  const int mode = 4;
  const double amp = 1e-6;
  const double k = 2 * pi * mode / L;
  const double c = 2.0 / (1 + k * k);
  FieldGrid g = cos_mode(L, n, mode, amp);
  const double T = 1.0, dt = 0.002;
  g = evolve(g, T, dt);
  double err = 0;
  for (int j = 0; j < n; ++j)
    err = std::max(err, std::abs(g.u[j] - amp * std::cos(k * (g.x[j] - c * T))));
  CHECK(err < 1e-6 * amp * 100);  // nonlinear correction is O(amp^2)
}

TEST_CASE("evolution diagnostics and conservation") {
  const double L = 30.0;
  const int n = 256;
  FieldGrid g = make_grid(L, n);
  std::vector<double> u(n);
  for (int j = 0; j < n; ++j) u[j] = 0.3 * std::exp(-g.x[j] * g.x[j]);
  g = grid_from_u(L, u);
  EvolveDiag diag;
  const FieldGrid g1 = evolve(g, 2.0, 0.002, {}, &diag);
  CHECK(diag.steps == 1000);
  CHECK(diag.mass_drift_rel < 1e-13);  // k = 0 mode is exactly conserved
  CHECK(diag.umax > 0);

  SUBCASE("time-step convergence is fourth order") {
    const FieldGrid a = evolve(g, 1.0, 0.02);
    const FieldGrid b = evolve(g, 1.0, 0.01);
    const FieldGrid c = evolve(g, 1.0, 0.005);
    const FieldGrid ref = evolve(g, 1.0, 0.00125);
    const double ea = max_abs_diff(a.u, ref.u);
    const double eb = max_abs_diff(b.u, ref.u);
    const double ec = max_abs_diff(c.u, ref.u);
    CHECK(ea / eb > 10.0);  // ~16 for clean RK4
    CHECK(eb / ec > 10.0);
    CHECK(ec < 1e-9);
  }
}

TEST_CASE("dealiasing keeps the top third of the flux empty") {
  const double L = 30.0;
  const int n = 128;
  FieldGrid g = make_grid(L, n);
  std::vector<double> u(n);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> U(-0.05, 0.05);
  for (int j = 0; j < n; ++j) u[j] = U(rng);  // spectrally full noise
  g = grid_from_u(L, u);
  const auto r = pde_rhs(g);
  // the flux part is rhs + 2 u_x; its masked modes (3 j > n) must vanish
  const auto ux = spectral_deriv(g.u, L);
  std::vector<double> flux(n);
  for (int j = 0; j < n; ++j) flux[j] = r[j] + 2.0 * ux[j];
  for (int jm = n / 3 + 1; jm <= n / 2; ++jm) {
    cplx acc = 0;
    for (int j = 0; j < n; ++j)
      acc += flux[j] *
             std::exp(-2.0 * pi * I * double(jm) * double(j) / double(n));
    CHECK(std::abs(acc) / n < 1e-12);
  }
}

TEST_CASE("blow-up detection") {
  const double L = 20.0;
  const int n = 128;
  FieldGrid g = make_grid(L, n);
  std::vector<double> u(n);
  for (int j = 0; j < n; ++j) u[j] = 0.2 * std::exp(-g.x[j] * g.x[j]);
  g = grid_from_u(L, u);
  EvolveOpts opts;
  opts.blowup_factor = 1.0 + 1e-12;  // any growth trips the guard
  opts.check_every = 1;
  CHECK_THROWS_AS((void)evolve(g, 1.0, 0.002, opts), NumericError);
}

TEST_CASE("time step must satisfy the transport bound") {
  const double L = 20.0;
  const int n = 128;
  FieldGrid g = make_grid(L, n);
  std::vector<double> u(n);
  for (int j = 0; j < n; ++j) u[j] = 2.0 * std::exp(-g.x[j] * g.x[j]);
  g = grid_from_u(L, u);
  CHECK_THROWS_AS((void)evolve(g, 1.0, 0.5), ConfigError);
}

TEST_CASE("pde residual of an evolved state is small") {
  const double L = 30.0;
  const int n = 256;
  FieldGrid g = make_grid(L, n);
  std::vector<double> u(n);
  for (int j = 0; j < n; ++j) u[j] = 0.3 * std::exp(-g.x[j] * g.x[j]);
  g = grid_from_u(L, u);
  const double dt = 0.002;
  g = evolve(g, 1.0, dt);
  std::vector<std::vector<double>> slices{g.u};
  FieldGrid gx = g;
  for (int s = 0; s < 2; ++s) {
    gx = evolve(gx, dt, dt);
    slices.push_back(gx.u);
  }
  CHECK(pde_residual(slices, dt, L) < 1e-4);
  CHECK_THROWS_AS((void)pde_residual({g.u, g.u}, dt, L), ConfigError);

  SUBCASE("zero field has zero residual") {
    const std::vector<double> z(n, 0.0);
    CHECK(pde_residual({z, z, z}, dt, L) == 0.0);
  }
}
