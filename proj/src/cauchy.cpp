#include "mch/cauchy.hpp"

#include <cmath>

namespace mch {

namespace {
constexpr double kBinom[4][4] = {
    {1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
}

cplx cauchy_integral(const CubicSpline& f, cplx z, int order) {
  if (order != 1 && order != 2)
    throw ConfigError("cauchy_integral: order must be 1 or 2");
  const bool on_axis = (z.imag() == 0.0);
  const double zr = z.real();
  if (order == 2 && on_axis && zr >= f.x_min() && zr <= f.x_max())
    throw NumericError("cauchy_integral: order-2 transform has no PV on the axis");
  cplx total = 0.0;
  for (int i = 0; i < f.n_intervals(); ++i) {
    const double x0 = f.node(i), x1 = f.node(i + 1);
    const auto c = f.coeff(i);
    const cplx z0 = z - x0;          // t = w + z0 with w = s - z
    const cplx w0 = x0 - z, w1 = x1 - z;
    // f(z) continued into the interval's polynomial
    const cplx fz = ((c[3] * z0 + c[2]) * z0 + c[1]) * z0 + c[0];
    if (order == 1) {
      cplx L;
      if (on_axis && x0 - 1e-14 <= zr && zr <= x1 + 1e-14) {
        // PV: drop a node-exact singular endpoint; its log eps cancels
        // against the matching term of the adjacent interval
        const double l1 = std::abs(w1) == 0.0 ? 0.0 : std::log(std::abs(w1));
        const double l0 = std::abs(w0) == 0.0 ? 0.0 : std::log(std::abs(w0));
        L = l1 - l0;
      } else {
        L = std::log(w1) - std::log(w0);
      }
      total += fz * L;
      // int (w+z0)^j / w dw regular parts: sum_{k>=1} C(j,k) z0^{j-k} w^k / k
      cplx z0p;
      for (int j = 1; j <= 3; ++j) {
        cplx w1k = 1.0, w0k = 1.0;
        for (int k = 1; k <= j; ++k) {
          w1k *= w1;
          w0k *= w0;
          z0p = 1.0;
          for (int m = 0; m < j - k; ++m) z0p *= z0;
          total += c[j] * kBinom[j][k] * z0p * (w1k - w0k) / double(k);
        }
      }
    } else {
      // int (w+z0)^j / w^2 dw: k=0 -> -z0^j/w (all j folded through fz),
      // k=1 -> C(j,1) z0^{j-1} log w, k>=2 -> C(j,k) z0^{j-k} w^{k-1}/(k-1)
      total += fz * (-(1.0 / w1 - 1.0 / w0));
      for (int j = 1; j <= 3; ++j) {
        for (int k = 1; k <= j; ++k) {
          cplx z0p = 1.0;
          for (int m = 0; m < j - k; ++m) z0p *= z0;
          const cplx coef = c[j] * kBinom[j][k] * z0p;
          if (k == 1) {
            total += coef * (std::log(w1) - std::log(w0));
          } else {
            cplx w1p = 1.0, w0p = 1.0;
            for (int m = 0; m < k - 1; ++m) {
              w1p *= w1;
              w0p *= w0;
            }
            total += coef * (w1p - w0p) / double(k - 1);
          }
        }
      }
    }
  }
  return total;
}

cplx cauchy_integral(const std::vector<double>& nodes,
                     const std::vector<double>& vals, cplx z, int order) {
  return cauchy_integral(CubicSpline(nodes, vals), z, order);
}

}  // namespace mch
