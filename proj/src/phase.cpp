#include "mch/phase.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace mch {

cplx k_of(cplx z) { return 0.5 * I * (z - 1.0 / z); }
cplx lam_of(cplx z) { return 0.5 * (z + 1.0 / z); }

std::pair<cplx, cplx> uniformize(cplx z) {
  if (z == cplx(0.0)) throw NumericError("uniformize: z = 0");
  return {k_of(z), lam_of(z)};
}

PhaseContext PhaseContext::make(double xi, double delta0) {
  if (!(delta0 > 0)) throw ConfigError("PhaseContext: delta0 must be > 0");
  if (xi <= -0.25 - delta0) return {xi, delta0, Regime::Left};
  if (xi >= 2.0 + delta0) return {xi, delta0, Regime::Right};
  throw ConfigError("PhaseContext: xi outside both regime bands");
}

namespace {
void check_theta_domain(cplx z) {
  if (z == cplx(0.0) || z == I || z == -I)
    throw NumericError("theta: singular at z in {0, +i, -i}");
}
}  // namespace

cplx theta(cplx z, double xi) {
  check_theta_domain(z);
  const cplx s = z + 1.0 / z;
  return -0.25 * (z - 1.0 / z) * (xi - 8.0 / (s * s));
}

double im_theta(cplx z, double xi) { return theta(z, xi).imag(); }

double wave_speed(cplx z) {
  const cplx k = k_of(z), lam = lam_of(z);
  const double rk = k.real();
  if (std::abs(rk) < 1e-300) throw NumericError("wave_speed: Re k = 0");
  return 2.0 * (k / (lam * lam)).real() / rk;
}

void validate_generator(const SpectralPoint& g, double tol) {
  const cplx z = g.zeta;
  if (!(z.imag() > 0)) throw ConfigError("generator: zeta must lie in C+");
  if (std::abs(z - I) < tol) throw ConfigError("generator: zeta = i excluded");
  if (std::abs(z.imag()) < tol)
    throw ConfigError("generator: zeta on the real axis excluded");
  if (std::abs(z.real()) < tol)
    throw ConfigError("generator: zeta on the imaginary axis excluded");
  const double mod = std::abs(z);
  if (g.kind == PoleKind::OnCircle) {
    if (std::abs(mod - 1.0) > tol)
      throw ConfigError("generator: on-circle point must have |zeta| = 1");
  } else {
    if (!(mod > 1.0 + tol))
      throw ConfigError("generator: off-circle generator must have |zeta| > 1");
  }
  if (g.C == cplx(0.0)) throw ConfigError("generator: zero norming constant");
}

DiscreteSpectrum expand_spectrum(const std::vector<SpectralPoint>& generators,
                                 double tol) {
  DiscreteSpectrum out;
  out.generators = generators;
  for (const auto& g : generators) {
    validate_generator(g, tol);
    out.orbit_start.push_back(static_cast<int>(out.expanded.size()));
    const cplx z = g.zeta, c = g.C, zb = std::conj(z), cb = std::conj(c);
    if (g.kind == PoleKind::OffCircle) {
      out.expanded.push_back({z, c, PoleKind::OffCircle});
      out.expanded.push_back({-zb, cb, PoleKind::OffCircle});
      out.expanded.push_back({1.0 / zb, -cb / (zb * zb), PoleKind::OffCircle});
      out.expanded.push_back({-1.0 / z, -c / (z * z), PoleKind::OffCircle});
    } else {
      out.expanded.push_back({z, c, PoleKind::OnCircle});
      out.expanded.push_back({-zb, cb, PoleKind::OnCircle});
    }
  }
  for (size_t i = 0; i < out.expanded.size(); ++i)
    for (size_t j = i + 1; j < out.expanded.size(); ++j)
      if (std::abs(out.expanded[i].zeta - out.expanded[j].zeta) < tol)
        throw ConfigError("expand_spectrum: degenerate orbit (coincident poles)");
  return out;
}

Partition partition_spectrum(const DiscreteSpectrum& spec,
                             const PhaseContext& ctx) {
  Partition part;
  double rho0 = 0.0;
  bool any = false;
  for (size_t g = 0; g < spec.generators.size(); ++g) {
    // all members of an orbit share Im theta, so the generator decides
    const cplx th = theta(spec.generators[g].zeta, ctx.xi);
    const double band = 1e-10 * std::max(1.0, std::abs(th));
    const double it = th.imag();
    if (it > band) {
      part.delta.push_back(static_cast<int>(g));
    } else if (it < -band) {
      part.nabla.push_back(static_cast<int>(g));
    } else {
      part.lambda.push_back(static_cast<int>(g));
      continue;
    }
    const int off = spec.orbit_start[g];
    for (int j = 0; j < spec.orbit_len(static_cast<int>(g)); ++j) {
      const double a = std::abs(im_theta(spec.expanded[off + j].zeta, ctx.xi));
      rho0 = any ? std::min(rho0, a) : a;
      any = true;
    }
  }
  part.rho0 = any ? rho0 : 0.0;
  return part;
}

SignGrid signature_grid(const PhaseContext& ctx, const Rect& window, int n,
                        double tol) {
  if (n < 2) throw ConfigError("signature_grid: n >= 2 required");
  SignGrid g;
  g.n = n;
  g.re.resize(size_t(n) * n);
  g.im.resize(size_t(n) * n);
  g.sign.resize(size_t(n) * n);
  const double puncture = 1e-6;
  for (int iy = 0; iy < n; ++iy) {
    const double y = window.im_lo + (window.im_hi - window.im_lo) * iy / (n - 1);
    for (int ix = 0; ix < n; ++ix) {
      const double x =
          window.re_lo + (window.re_hi - window.re_lo) * ix / (n - 1);
      const size_t idx = size_t(iy) * n + ix;
      g.re[idx] = x;
      g.im[idx] = y;
      const cplx z{x, y};
      if (std::abs(z) < puncture || std::abs(z - I) < puncture ||
          std::abs(z + I) < puncture) {
        g.sign[idx] = 2;  // punctured
        continue;
      }
      const cplx th = theta(z, ctx.xi);
      const double band = tol * std::max(1.0, std::abs(th));
      g.sign[idx] = th.imag() > band ? 1 : (th.imag() < -band ? -1 : 0);
    }
  }
  return g;
}

SectorReport check_sector_bound(const PhaseContext& ctx, double phi,
                                long samples, uint64_t seed, double l_min,
                                double l_max) {
  if (!(phi > 0 && phi < pi / 8))
    throw ConfigError("check_sector_bound: aperture must lie in (0, pi/8)");
  if (ctx.regime == Regime::Right && std::cos(2 * phi) < 2.0 / ctx.xi)
    throw ConfigError(
        "check_sector_bound: aperture too wide for this xi (needs cos 2phi >= "
        "2/xi)");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ulog(std::log(l_min), std::log(l_max));
  std::uniform_real_distribution<double> uphi(0.0, phi);
  std::uniform_int_distribution<int> uside(0, 1);

  if (ctx.regime == Regime::Left) {
    long viol = 0;
    double margin = 0.0;
    bool first = true;
    for (long s = 0; s < samples; ++s) {
      const double l = std::exp(ulog(rng));
      double ang = uphi(rng);
      if (uside(rng)) ang = pi - ang;
      const cplx z = std::polar(l, ang);
      const double m = im_theta(z, ctx.xi) - 0.25 * ctx.delta0 * z.imag();
      if (first || m < margin) margin = m;
      first = false;
      if (m < -1e-12) ++viol;
    }
    return {viol, margin};
  }
  // Right: fit c = min over samples of (-Im theta / Im z); c > 0 certifies the
  // bound Im theta <= -c Im z for the sampled sectors.
  double c_fit = 0.0;
  bool first = true;
  for (long s = 0; s < samples; ++s) {
    const double l = std::exp(ulog(rng));
    double ang = uphi(rng);
    if (uside(rng)) ang = pi - ang;
    const cplx z = std::polar(l, ang);
    const double v = z.imag();
    if (v < 1e-300) continue;  // on the axis both sides vanish (equality case)
    const double ratio = -im_theta(z, ctx.xi) / v;
    if (first || ratio < c_fit) c_fit = ratio;
    first = false;
  }
  const long viol = (c_fit > 0) ? 0 : 1;
  return {viol, c_fit};
}

}  // namespace mch
