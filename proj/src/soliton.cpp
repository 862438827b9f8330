#include "mch/soliton.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace mch {

SolitonData make_soliton_data(const std::vector<Generator>& gens, double tol) {
  SolitonData data;
  data.generators = gens;
  std::vector<SpectralPoint> pts;
  for (const auto& g : gens) {
    if (g.Ct == cplx(0.0))
      throw ConfigError("soliton data: zero norming constant");
    pts.push_back({g.zeta, -I * g.zeta * g.Ct, g.kind});
  }
  data.spec = expand_spectrum(pts, tol);
  data.N = static_cast<int>(data.spec.expanded.size());
  return data;
}

namespace {

// residue factor gamma_k = c_k exp(k(zeta_k)(y - 2t/lambda_k^2))
cplx gamma_at(const SpectralPoint& p, double y, double t) {
  const auto [k, lam] = uniformize(p.zeta);
  const cplx e = k * (y - 2.0 * t / (lam * lam));
  if (e.real() > 700.0)
    throw NumericError("soliton: residue factor overflow; narrow the y-window");
  return p.C * std::exp(e);
}

struct FgAtI {
  cplx f, g;  // f = M11 + M21, g = M12 + M22 at z
};

FgAtI fg_at(const SolitonState& st, const SolitonData& data, cplx z) {
  cplx f = 1.0, g = 1.0;
  for (int k = 0; k < data.N; ++k) {
    const cplx zk = data.spec.expanded[k].zeta;
    f += (st.beta[k] + st.sigma[k]) / (z - zk);
    g += (std::conj(st.beta[k]) - std::conj(st.sigma[k])) / (z - std::conj(zk));
  }
  return {f, g};
}

double reality_tol(double cond) { return std::max(1e-10, 1e-16 * cond); }

}  // namespace

SolitonState assemble_and_solve(const SolitonData& data, double y, double t,
                                const SolveOpts& opts) {
  SolitonState st;
  st.y = y;
  st.t = t;
  const int N = data.N;
  if (N == 0) {
    st.x_of_y = y;
    return st;
  }
  st.gamma.resize(N);
  for (int k = 0; k < N; ++k)
    st.gamma[k] = gamma_at(data.spec.expanded[k], y, t);

  // unknowns [sigma_0..sigma_{N-1}, b_0..b_{N-1}] with b = conj(beta);
  // row I_k:  sigma_k - gamma_k sum_h b_h/(zeta_k - conj zeta_h) = gamma_k
  // row II_k: b_k + conj(gamma_k) sum_h sigma_h/(conj zeta_k - zeta_h) = 0
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(2 * N, 2 * N);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(2 * N);
  for (int k = 0; k < N; ++k) {
    const cplx zk = data.spec.expanded[k].zeta;
    for (int h = 0; h < N; ++h) {
      const cplx zh = data.spec.expanded[h].zeta;
      A(k, N + h) = -st.gamma[k] / (zk - std::conj(zh));
      A(N + k, h) = std::conj(st.gamma[k]) / (std::conj(zk) - zh);
    }
    rhs(k) = st.gamma[k];
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  const double smin = svd.singularValues()(2 * N - 1);
  st.cond = smin > 0 ? svd.singularValues()(0) / smin
                     : std::numeric_limits<double>::infinity();
  if (!(st.cond < opts.cond_max))
    throw NumericError("soliton: residue system ill-conditioned");
  const Eigen::VectorXcd sol = Eigen::PartialPivLU<Eigen::MatrixXcd>(A).solve(rhs);
  st.sigma.resize(N);
  st.beta.resize(N);
  for (int k = 0; k < N; ++k) {
    st.sigma[k] = sol(k);
    st.beta[k] = std::conj(sol(N + k));
  }
  reconstruct_u(st, data, opts);
  coordinate_map(st, data, opts);
  return st;
}

Mat2 eval_M(const SolitonState& st, const SolitonData& data, cplx z) {
  Mat2 m{1.0, 0.0, 0.0, 1.0};
  for (int k = 0; k < static_cast<int>(data.N); ++k) {
    const cplx zk = data.spec.expanded[k].zeta;
    if (std::abs(z - zk) < 1e-10 || std::abs(z - std::conj(zk)) < 1e-10)
      throw NumericError("eval_M: z at a pole of the ansatz");
    m.a00 += st.beta[k] / (z - zk);
    m.a10 += st.sigma[k] / (z - zk);
    m.a01 += -std::conj(st.sigma[k]) / (z - std::conj(zk));
    m.a11 += std::conj(st.beta[k]) / (z - std::conj(zk));
  }
  return m;
}

double residue_check(const SolitonState& st, const SolitonData& data) {
  double worst = 0.0;
  const int N = data.N;
  for (int k = 0; k < N; ++k) {
    const cplx zk = data.spec.expanded[k].zeta;
    const cplx gk = st.gamma[k];
    const double scale = std::max(1.0, std::abs(gk));
    // regular part of the second column at zeta_k and first at conj zeta_k
    cplx m12 = 0.0, m22 = 1.0, m11 = 1.0, m21 = 0.0;
    for (int h = 0; h < N; ++h) {
      const cplx zh = data.spec.expanded[h].zeta;
      m12 += -std::conj(st.sigma[h]) / (zk - std::conj(zh));
      m22 += std::conj(st.beta[h]) / (zk - std::conj(zh));
      m11 += st.beta[h] / (std::conj(zk) - zh);
      m21 += st.sigma[h] / (std::conj(zk) - zh);
    }
    // Res at zeta_k = lim M [[0,0],[gamma_k,0]], at conj zeta_k the mirror
    worst = std::max(worst, std::abs(st.beta[k] - gk * m12) / scale);
    worst = std::max(worst, std::abs(st.sigma[k] - gk * m22) / scale);
    worst = std::max(worst,
                     std::abs(-std::conj(st.sigma[k]) + std::conj(gk) * m11) / scale);
    worst = std::max(worst,
                     std::abs(std::conj(st.beta[k]) + std::conj(gk) * m21) / scale);
  }
  return worst;
}

double reconstruct_u(SolitonState& st, const SolitonData& data,
                     const SolveOpts& opts) {
  if (data.N == 0) {
    st.u_r = 0.0;
    st.dual_gap = 0.0;
    return 0.0;
  }
  const auto [fi, gi] = fg_at(st, data, I);
  if (std::abs(fi) < 1e-12 || std::abs(gi) < 1e-12)
    throw NumericError("reconstruct_u: degenerate normalization at z = i");
  cplx closed = 0.0;
  for (int k = 0; k < data.N; ++k) {
    const cplx zk = data.spec.expanded[k].zeta;
    const cplx di = I - zk, dib = I - std::conj(zk);
    closed += (st.beta[k] + st.sigma[k]) / (di * di) / fi;
    closed += (std::conj(st.beta[k]) - std::conj(st.sigma[k])) / (dib * dib) / gi;
  }
  // numeric limit (1 - f(z)g(z)/(f(i)g(i)))/(z - i), symmetric in z = i +- eps
  // so the O(eps) truncation cancels
  const double eps = 1e-5;
  const auto [fp, gp] = fg_at(st, data, I + eps);
  const auto [fm, gm] = fg_at(st, data, I - eps);
  const cplx qp = (1.0 - fp * gp / (fi * gi)) / cplx(eps);
  const cplx qm = (1.0 - fm * gm / (fi * gi)) / cplx(-eps);
  const cplx numeric = 0.5 * (qp + qm);
  st.dual_gap = std::abs(closed - numeric);
  if (st.dual_gap > std::max(opts.dual_tol, 1e-15 * st.cond))
    throw NumericError("reconstruct_u: reconstruction paths disagree");
  if (std::abs(closed.imag()) > reality_tol(st.cond))
    throw NumericError("reconstruct_u: non-real reconstruction");
  st.u_r = closed.real();
  return st.u_r;
}

std::pair<double, double> coordinate_map(SolitonState& st,
                                         const SolitonData& data,
                                         const SolveOpts&) {
  if (data.N == 0) {
    st.c_plus = 0.0;
    st.x_of_y = st.y;
    return {0.0, st.y};
  }
  const auto [fi, gi] = fg_at(st, data, I);
  const cplx ratio = gi / fi;
  if (ratio.real() <= 0.0 && std::abs(ratio.imag()) < 1e-12)
    throw NumericError("coordinate_map: log argument on the branch cut");
  const cplx cp = -std::log(ratio);
  if (std::abs(cp.imag()) > reality_tol(st.cond))
    throw NumericError("coordinate_map: non-real coordinate shift");
  st.c_plus = cp.real();
  st.x_of_y = st.y + st.c_plus;
  return {st.c_plus, st.x_of_y};
}

std::pair<double, double> gamma_window(const SolitonData& data, double t,
                                       double cap) {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (const auto& p : data.spec.expanded) {
    const auto [k, lam] = uniformize(p.zeta);
    const double rk = k.real();
    const double drift = std::real(k * (-2.0 * t / (lam * lam)));
    const double budget = std::log(cap) - std::log(std::abs(p.C)) - drift;
    // ln|gamma| = ln|C| + drift + rk * y <= ln cap
    if (std::abs(rk) < 1e-14) {
      if (budget < 0)
        throw NumericError("gamma_window: cap exceeded for all y");
    } else if (rk > 0) {
      hi = std::min(hi, budget / rk);
    } else {
      lo = std::max(lo, budget / rk);
    }
  }
  return {lo, hi};
}

namespace {

// Brent root find on [a, b] with f(a) f(b) < 0
template <class F>
double brent(F f, double a, double b, double fa, double fb, double xtol) {
  if (fa == 0) return a;
  if (fb == 0) return b;
  if (fa * fb > 0) throw NumericError("profile: inversion bracket lost");
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < 200; ++it) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2 * std::numeric_limits<double>::epsilon() * std::abs(b) +
                        0.5 * xtol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2 * xm * s;
        q = 1 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2 * xm * q * (q - r) - (b - a) * (r - 1));
        q = (q - 1) * (r - 1) * (s - 1);
      }
      if (p > 0) q = -q;
      p = std::abs(p);
      if (2 * p < std::min(3 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : (xm > 0 ? tol1 : -tol1);
    fb = f(b);
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
  }
  throw NumericError("profile: inversion did not converge");
}

}  // namespace

std::vector<double> profile_on_x_grid(const SolitonData& data, double t,
                                      const std::vector<double>& x_grid,
                                      const ProfileOpts& opts) {
  if (data.N == 0) return std::vector<double>(x_grid.size(), 0.0);
  auto [wlo, whi] = gamma_window(data, t, opts.gamma_cap);
  wlo = std::max(wlo, -opts.ywin);
  whi = std::min(whi, opts.ywin);
  if (!(wlo < whi))
    throw NumericError("profile: empty y-window under the residue-factor cap");
  const int ny = std::max(2, static_cast<int>(std::ceil((whi - wlo) / opts.sweep_step)) + 1);
  std::vector<double> ys = linspace(wlo, whi, ny), xs(ny), us(ny);
  for (int j = 0; j < ny; ++j) {
    const SolitonState st = assemble_and_solve(data, ys[j], t, opts.solve);
    xs[j] = st.x_of_y;
    us[j] = st.u_r;
  }
  for (int j = 0; j + 1 < ny; ++j)
    if (!(xs[j + 1] > xs[j]))
      throw NumericError("profile: non-monotone coordinate map x(y)");
  std::vector<double> out(x_grid.size());
  for (size_t i = 0; i < x_grid.size(); ++i) {
    const double x = x_grid[i];
    if (x < xs.front() || x > xs.back()) {
      const double edge = x < xs.front() ? us.front() : us.back();
      if (std::abs(edge) > opts.tail_tol)
        throw NumericError("profile: x-grid extends beyond the y-image");
      out[i] = 0.0;
      continue;
    }
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const int j = std::min(static_cast<int>(it - xs.begin()), ny - 1) - 1;
    auto fx = [&](double y) {
      return assemble_and_solve(data, y, t, opts.solve).x_of_y - x;
    };
    const double y = brent(fx, ys[j], ys[j + 1], xs[j] - x, xs[j + 1] - x, 1e-13);
    out[i] = assemble_and_solve(data, y, t, opts.solve).u_r;
  }
  return out;
}

}  // namespace mch
