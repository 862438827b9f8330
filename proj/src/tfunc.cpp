#include "mch/tfunc.hpp"

#include <cmath>

#include "mch/cauchy.hpp"

namespace mch {

namespace {

// grouped Blaschke factor of one off-circle orbit {z0, -conj z0, 1/conj z0,
// -1/z0}: zeros at the members, poles at their conjugates, limits 1 at 0, inf
cplx quad_factor(cplx z, cplx z0) {
  const cplx zb = std::conj(z0);
  return (z - z0) / (z / zb - 1.0) * (z + zb) / (z / z0 + 1.0) *
         (z - 1.0 / zb) / (z0 * z - 1.0) * (z + 1.0 / z0) / (zb * z + 1.0);
}

// grouped factor of one on-circle pair {w, -conj w}
cplx pair_factor(cplx z, cplx w) {
  const cplx wb = std::conj(w);
  return (z - w) / (w * z - 1.0) * (z + wb) / (wb * z + 1.0);
}

// d/dz log of the grouped products at z, every factor in the form
// (z - a)/(b z - c): contribution 1/(z - a) - b/(b z - c)
cplx log_deriv(const std::vector<cplx>& quads, const std::vector<cplx>& pairs,
               cplx z) {
  cplx s = 0.0;
  auto add = [&](cplx a, cplx b, cplx c) { s += 1.0 / (z - a) - b / (b * z - c); };
  for (cplx z0 : quads) {
    const cplx zb = std::conj(z0);
    add(z0, 1.0 / zb, 1.0);
    add(-zb, 1.0 / z0, -1.0);
    add(1.0 / zb, z0, 1.0);
    add(-1.0 / z0, zb, -1.0);
  }
  for (cplx w : pairs) {
    const cplx wb = std::conj(w);
    add(w, w, 1.0);
    add(-wb, wb, -1.0);
  }
  return s;
}

}  // namespace

TFunction TFunction::make(const PhaseContext& ctx, const DiscreteSpectrum& spec,
                          const Partition& part,
                          const std::vector<double>& z_grid,
                          const std::vector<cplx>& r) {
  TFunction T;
  T.ctx_ = ctx;
  for (int gi : part.delta) {
    const auto& gen = spec.generators[gi];
    if (gen.kind == PoleKind::OffCircle)
      T.quads_.push_back(gen.zeta);
    else
      T.pairs_.push_back(gen.zeta);
    const int len = spec.orbit_len(gi);
    for (int j = 0; j < len; ++j)
      T.t_poles_.push_back(std::conj(spec.expanded[spec.orbit_start[gi] + j].zeta));
  }
  // integral factor: Left regime only, integrand truncated where |r| < 1e-10
  if (ctx.regime == Regime::Left && !r.empty()) {
    if (z_grid.size() != r.size())
      throw ConfigError("TFunction: z_grid/r size mismatch");
    size_t lo = 0, hi = r.size();
    while (lo < hi && std::abs(r[lo]) < 1e-10) ++lo;
    while (hi > lo && std::abs(r[hi - 1]) < 1e-10) --hi;
    if (hi - lo >= 4) {
      std::vector<double> nodes(z_grid.begin() + lo, z_grid.begin() + hi);
      std::vector<double> g(hi - lo);
      for (size_t i = lo; i < hi; ++i) g[i - lo] = std::log1p(std::norm(r[i]));
      T.g_sp_ = CubicSpline(nodes, g);
      T.use_delta_ = true;
    }
  }
  // closed form at i: squared quad ratios, single pair ratios, times delta(i)
  cplx prod = 1.0;
  for (cplx z0 : T.quads_) {
    const cplx zb = std::conj(z0);
    const cplx f = (I - z0) * (I + zb) / ((I - zb) * (I + z0));
    prod *= f * f;
  }
  for (cplx w : T.pairs_) {
    const cplx wb = std::conj(w);
    prod *= (I - w) * (I + wb) / ((I + w) * (I - wb));
  }
  T.t_i_ = prod * T.delta_factor(I);
  // full expansion slope at i: T(i) (d/dz log B + d/dz log delta)
  cplx ld = log_deriv(T.quads_, T.pairs_, I);
  if (T.use_delta_)
    ld += cauchy_integral(T.g_sp_, I, 2) / (2.0 * pi * I);
  T.slope_ = T.t_i_ * ld;
  return T;
}

cplx TFunction::delta_factor(cplx z) const {
  if (!use_delta_) return 1.0;
  if (std::abs(z.imag()) < quad_gap)
    throw NumericError("delta_factor: z too close to the real axis");
  return std::exp(cauchy_integral(g_sp_, z, 1) / (2.0 * pi * I));
}

cplx TFunction::blaschke(cplx z) const {
  cplx prod = 1.0;
  for (cplx z0 : quads_) prod *= quad_factor(z, z0);
  for (cplx w : pairs_) prod *= pair_factor(z, w);
  return prod;
}

cplx TFunction::operator()(cplx z) const {
  for (cplx p : t_poles_)
    if (std::abs(z - p) < 1e-8)
      throw NumericError("TFunction: z at a pole of T");
  return delta_factor(z) * blaschke(z);
}

cplx TFunction::limit_zero() const {
  // every grouped factor has an exact z -> 0 value; the integral factor tends
  // to exp of the principal-value moment integral (zero for symmetric data)
  cplx prod = 1.0;
  for (cplx z0 : quads_) {
    const cplx zb = std::conj(z0);
    prod *= z0 * zb / (zb * z0);  // f1(0) f2(0) f3(0) f4(0)
  }
  for (cplx w : pairs_) prod *= w * std::conj(w);
  if (use_delta_)
    prod *= std::exp(cauchy_integral(g_sp_, cplx(0.0), 1) / (2.0 * pi * I));
  return prod;
}

cplx TFunction::limit_inf() const {
  cplx prod = 1.0;
  for (cplx z0 : quads_) {
    const cplx zb = std::conj(z0);
    prod *= (zb * z0) / (z0 * zb);  // leading coefficients of the four factors
  }
  for (cplx w : pairs_) prod *= 1.0 / (w * std::conj(w));
  return prod;  // integral factor tends to exp(0) = 1
}

double TFunction::jump_defect(double x) const {
  const double eps[3] = {1e-2, 5e-3, 2.5e-3};
  cplx ratio[3];
  for (int j = 0; j < 3; ++j)
    ratio[j] = (*this)(cplx(x, eps[j])) / (*this)(cplx(x, -eps[j]));
  const cplx r1 = 2.0 * ratio[1] - ratio[0];
  const cplx r2 = 2.0 * ratio[2] - ratio[1];
  const cplx lim = (4.0 * r2 - r1) / 3.0;
  double target = 1.0;
  if (use_delta_ && x >= g_sp_.x_min() && x <= g_sp_.x_max())
    target = std::exp(g_sp_(x));
  return std::abs(lim - target);
}

}  // namespace mch
