#pragma once
#include <cmath>
#include <vector>

#include "mch/cauchy.hpp"
#include "mch/common.hpp"
#include "mch/phase.hpp"
#include "mch/spline.hpp"

namespace mch {

// m0(x) = u0 - u0'' sampled on a uniform grid wide enough that the tails sit
// below trunc_tol; q = sqrt(m^2 + 1); p(x) = x - int_x^inf (q - 1).
class InitialProfile {
 public:
  static InitialProfile gaussian(double A, double w, double X, double h);
  static InitialProfile zero(double X, double h);
  static InitialProfile from_samples(std::vector<double> x,
                                     std::vector<double> m,
                                     double trunc_tol = 1e-12);

  double m(double x) const { return inside(x) ? m_sp_(x) : 0.0; }
  double mx(double x) const { return inside(x) ? m_sp_.deriv(x) : 0.0; }
  double q(double x) const {
    const double mm = m(x);
    return std::sqrt(mm * mm + 1.0);
  }
  double p(double x) const;
  double qm1_total() const { return qm1_total_; }  // int (q - 1) dx
  double X() const { return X_; }
  double h() const { return h_; }
  const std::vector<double>& x_grid() const { return x_; }
  const std::vector<double>& m_samples() const { return m_; }
  bool is_zero() const { return zero_; }

 private:
  InitialProfile() = default;
  void finish(double trunc_tol);
  bool inside(double x) const { return x >= -X_ && x <= X_; }
  std::vector<double> x_, m_;
  CubicSpline m_sp_, qm1_cum_;  // qm1_cum_ holds q-1 samples; p uses its integral
  double X_ = 0, h_ = 0, qm1_total_ = 0;
  bool zero_ = false;
};

struct OdeOpts {
  double rel_tol = 1e-11;
  double abs_tol = 1e-13;
};

// Jost system mu_x = -(i/4)(z - 1/z) q [sigma3, mu] + P mu integrated from the
// boundary (identity at +-X) to x_stop; side -1 starts at -X, +1 at +X.
Mat2 jost_at(const InitialProfile& pr, cplx z, int side, double x_stop,
             const OdeOpts& opts = {});
inline Mat2 jost_at_origin(const InitialProfile& pr, cplx z, int side,
                           const OdeOpts& opts = {}) {
  return jost_at(pr, z, side, 0.0, opts);
}

// real-axis scattering coefficients at the matching point x0:
//   a = mu-_00 conj(mu+_00) + mu-_10 conj(mu+_10)
//   b = (mu+_00 mu-_10 - mu+_10 mu-_00) e^{-k(z) p(x0)}
std::pair<cplx, cplx> scattering_coefficients(const InitialProfile& pr,
                                              double z, double x0 = 0.0,
                                              const OdeOpts& opts = {});

// C+ continuation: Wronskian of the analytic columns ([mu-]_1, [mu+]_2)
cplx a_upper_half(const InitialProfile& pr, cplx z, double x_stop = 0.0,
                  const OdeOpts& opts = {});

// symmetric log-spaced grid: half log-uniform on [zmin, 1/zmin] built so node
// j and node n-1-j are exact floating-point reciprocals; mirrored negatives
std::vector<double> make_z_grid(double zmin, int n_half);

struct ScatteringData {
  std::vector<double> z_grid;
  std::vector<cplx> r, a, b;
  DiscreteSpectrum spectrum;
  cplx a_at_i{1.0, 0.0};
  // defect diagnostics filled by reflection_grid
  double unitarity_defect = 0;   // max | |a|^2 + |b|^2 - 1 |
  double sym_recip_defect = 0;   // max | r(z) - conj(r(1/z)) |
  double sym_neg_defect = 0;     // max | r(z) + conj(r(-z)) |
  double r_near_zero = 0;        // max |r| at the two nodes nearest 0
};

ScatteringData reflection_grid(const InitialProfile& pr,
                               const std::vector<double>& z_grid,
                               const OdeOpts& opts = {}, double a_min = 0.05);

// trace formula: product over expanded poles (z - zeta)/(z - conj zeta) times
// exp(-(1/2 pi i) int log(1 + |r|^2)/(s - z) ds)
cplx trace_formula_a(const std::vector<double>& z_grid,
                     const std::vector<cplx>& r, const DiscreteSpectrum& spec,
                     cplx z, double quad_gap = 0.05);

// principal value (1/2 pi i) int log(1 + |r|^2)/s ds; small for valid data
double moment_zero_check(const std::vector<double>& z_grid,
                         const std::vector<cplx>& r);

// argument-principle count + Newton refinement of zeros of a in a rectangle
// avoiding the real axis; the reported constant is generator-level:
//   C = b~ e^{-k(zeta) p(x0)} / (-i zeta a'(zeta)),  b~ = mu-_00 / mu+_01 at x0
std::vector<SpectralPoint> locate_zeros(const InitialProfile& pr,
                                        const Rect& region,
                                        const OdeOpts& opts = {.rel_tol = 1e-12,
                                                               .abs_tol = 1e-14},
                                        double x0 = 0.0);

}  // namespace mch
