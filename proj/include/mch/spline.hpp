#pragma once
#include <array>
#include <vector>

#include "mch/common.hpp"

namespace mch {

// Cubic interpolating spline with not-a-knot end conditions.
// Piece i holds f(x) = c0 + c1 t + c2 t^2 + c3 t^3 with t = x - x_i;
// the raw coefficients feed the closed-form Cauchy quadrature.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, const std::vector<double>& y);

  double operator()(double xq) const;
  double deriv(double xq) const;
  // integral of the spline from x.front() to xq (exact, piecewise quartic)
  double integral_from_start(double xq) const;
  double integral() const { return prefix_.back(); }

  int n_intervals() const { return static_cast<int>(x_.size()) - 1; }
  double node(int i) const { return x_[i]; }
  std::array<double, 4> coeff(int i) const {
    return {c0_[i], c1_[i], c2_[i], c3_[i]};
  }
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

 private:
  int find(double xq) const;
  std::vector<double> x_, c0_, c1_, c2_, c3_, prefix_;
};

}  // namespace mch
