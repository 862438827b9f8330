#include "mch/spline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace mch {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

CubicSpline::CubicSpline(std::vector<double> x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  if (n < 2 || y.size() != x.size())
    throw ConfigError("spline: need >= 2 matching nodes");
  for (int i = 0; i + 1 < n; ++i)
    if (!(x[i + 1] > x[i])) throw ConfigError("spline: nodes not increasing");
  x_ = std::move(x);
  c0_.assign(n - 1, 0.0);
  c1_.assign(n - 1, 0.0);
  c2_.assign(n - 1, 0.0);
  c3_.assign(n - 1, 0.0);

  if (n == 2) {
    c0_[0] = y[0];
    c1_[0] = (y[1] - y[0]) / (x_[1] - x_[0]);
  } else if (n == 3) {
    // single quadratic through the three points
    const double h0 = x_[1] - x_[0], h1 = x_[2] - x_[1];
    const double s0 = (y[1] - y[0]) / h0, s1 = (y[2] - y[1]) / h1;
    const double a2 = (s1 - s0) / (h0 + h1);
    for (int i = 0; i < 2; ++i) {
      const double t0 = x_[i] - x_[0];
      // p(x) = y0 + s0 (x-x0) + a2 (x-x0)(x-x1), expand about x_i
      c0_[i] = y[0] + s0 * t0 + a2 * t0 * (x_[i] - x_[1]);
      c1_[i] = s0 + a2 * (2 * t0 - h0);
      c2_[i] = a2;
    }
  } else {
    // solve for node second derivatives M with not-a-knot ends:
    // third-derivative continuity across x_1 and x_{n-2}.
    std::vector<double> h(n - 1);
    for (int i = 0; i < n - 1; ++i) h[i] = x_[i + 1] - x_[i];
    // rows 1..n-2 are the standard tridiagonal continuity equations;
    // the end rows couple three unknowns, eliminated into their neighbors.
    std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
    for (int i = 1; i < n - 1; ++i) {
      a[i] = h[i - 1] / 6.0;
      b[i] = (h[i - 1] + h[i]) / 3.0;
      c[i] = h[i] / 6.0;
      d[i] = (y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1];
    }
    // not-a-knot: h1 M0 = (h0+h1) M1 - h0 M2; eliminate M0 from row 1,
    // and mirror at the right end.
    {
      const double A = a[1];  // multiplies M0
      b[1] += A * (h[0] + h[1]) / h[1];
      c[1] += A * (-h[0] / h[1]);
      a[1] = 0.0;
    }
    {
      const double C = c[n - 2];  // multiplies M_{n-1}
      // h_{n-3} M_{n-1} = (h_{n-2}+h_{n-3}) M_{n-2} - h_{n-2} M_{n-3}
      b[n - 2] += C * (h[n - 2] + h[n - 3]) / h[n - 3];
      a[n - 2] += C * (-h[n - 2] / h[n - 3]);
      c[n - 2] = 0.0;
    }
    // Thomas on rows 1..n-2
    std::vector<double> M(n, 0.0), cp(n, 0.0), dp(n, 0.0);
    cp[1] = c[1] / b[1];
    dp[1] = d[1] / b[1];
    for (int i = 2; i < n - 1; ++i) {
      const double den = b[i] - a[i] * cp[i - 1];
      cp[i] = c[i] / den;
      dp[i] = (d[i] - a[i] * dp[i - 1]) / den;
    }
    M[n - 2] = dp[n - 2];
    for (int i = n - 3; i >= 1; --i) M[i] = dp[i] - cp[i] * M[i + 1];
    M[0] = ((h[0] + h[1]) * M[1] - h[0] * M[2]) / h[1];
    M[n - 1] = ((h[n - 2] + h[n - 3]) * M[n - 2] - h[n - 2] * M[n - 3]) / h[n - 3];
    for (int i = 0; i < n - 1; ++i) {
      c0_[i] = y[i];
      c1_[i] = (y[i + 1] - y[i]) / h[i] - h[i] * (2 * M[i] + M[i + 1]) / 6.0;
      c2_[i] = M[i] / 2.0;
      c3_[i] = (M[i + 1] - M[i]) / (6.0 * h[i]);
    }
  }
  // prefix integrals for integral_from_start
  prefix_.assign(n, 0.0);
  for (int i = 0; i < n - 1; ++i) {
    const double t = x_[i + 1] - x_[i];
    prefix_[i + 1] =
        prefix_[i] +
        t * (c0_[i] + t * (c1_[i] / 2 + t * (c2_[i] / 3 + t * c3_[i] / 4)));
  }
}

int CubicSpline::find(double xq) const {
  const int n = static_cast<int>(x_.size());
  auto it = std::upper_bound(x_.begin(), x_.end(), xq);
  int i = static_cast<int>(it - x_.begin()) - 1;
  return std::clamp(i, 0, n - 2);
}

double CubicSpline::operator()(double xq) const {
  const int i = find(xq);
  const double t = xq - x_[i];
  return c0_[i] + t * (c1_[i] + t * (c2_[i] + t * c3_[i]));
}

double CubicSpline::deriv(double xq) const {
  const int i = find(xq);
  const double t = xq - x_[i];
  return c1_[i] + t * (2 * c2_[i] + t * 3 * c3_[i]);
}

double CubicSpline::integral_from_start(double xq) const {
  const int i = find(xq);
  const double t = xq - x_[i];
  return prefix_[i] +
         t * (c0_[i] + t * (c1_[i] / 2 + t * (c2_[i] / 3 + t * c3_[i] / 4)));
}

}  // namespace mch
