#pragma once
#include <vector>

#include "mch/common.hpp"
#include "mch/phase.hpp"
#include "mch/spline.hpp"

namespace mch {

// scalar modification function T(z; xi): Blaschke-type product over the Delta
// poles, grouped per orbit so the z -> 0 and z -> inf limits are exactly 1,
// times the Cauchy-integral factor
//   delta(z) = exp( (1/2 pi i) int log(1 + |r|^2)/(s - z) ds )
// taken over the reflection grid. The integral factor is present only in the
// Left regime with nontrivial r; in the Right regime it is identically 1.
class TFunction {
 public:
  // spec/part decide which generators lie in Delta; z_grid/r feed the
  // integral factor (pass empty for reflectionless data)
  static TFunction make(const PhaseContext& ctx, const DiscreteSpectrum& spec,
                        const Partition& part,
                        const std::vector<double>& z_grid = {},
                        const std::vector<cplx>& r = {});

  cplx delta_factor(cplx z) const;  // 1 unless Left with r data
  cplx blaschke(cplx z) const;      // grouped product over Delta orbits
  cplx operator()(cplx z) const;    // delta * blaschke; errors near T-poles
  cplx at_i() const { return t_i_; }           // closed form, cached
  cplx slope_at_i() const { return slope_; }   // full d/dz at i, cached
  cplx limit_zero() const;  // structural z -> 0 limit (exact factor limits)
  cplx limit_inf() const;   // structural |z| -> inf limit

  // |T+(x)/T-(x) - (1 + |r(x)|^2)| with the boundary values taken at x +- i eps
  // and Richardson-extrapolated over eps in {1e-2, 5e-3, 2.5e-3}
  double jump_defect(double x) const;

  bool has_integral() const { return use_delta_; }
  const std::vector<cplx>& quad_gens() const { return quads_; }
  const std::vector<cplx>& pair_gens() const { return pairs_; }

  // delta_factor accuracy guard: |Im z| below this (z off the axis) errors
  double quad_gap = 1e-3;

 private:
  PhaseContext ctx_{0.0, 0.0, Regime::Left};
  std::vector<cplx> quads_, pairs_;  // Delta generators by kind
  std::vector<cplx> t_poles_;        // pole locations of T (conj orbit members)
  CubicSpline g_sp_;                 // log(1 + |r|^2) on the truncated grid
  bool use_delta_ = false;
  cplx t_i_{1.0, 0.0};
  cplx slope_{0.0, 0.0};
};

}  // namespace mch
