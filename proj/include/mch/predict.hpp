#pragma once
#include <utility>
#include <vector>

#include "mch/common.hpp"
#include "mch/phase.hpp"
#include "mch/scattering.hpp"
#include "mch/soliton.hpp"
#include "mch/tfunc.hpp"

namespace mch {

// long-time prediction at ratio xi = y/t: the surviving solitons are the
// Lambda-poles, their constants gain the factor T(zeta)^2, and the physical
// frame is shifted by 2 ln T(i)
struct Prediction {
  PhaseContext ctx;
  SolitonData lambda_data;      // Lambda generators with modified constants
  cplx T_i{1.0, 0.0};
  double shift = 0.0;           // 2 ln T(i); imaginary part asserted < 1e-8
  double rho0 = 0.0;            // min |Im theta| over the traded poles
  double rho = 0.2;             // reported error-scale constant in (0, 1/4)
  std::vector<int> lambda_idx;  // generator indices retained
  std::vector<double> x_grid, u_pred;
};

// sdata carries the generator-level spectrum (and the reflection grid when
// present); the prediction is evaluated on x_grid at time t
Prediction predict(const ScatteringData& sdata, const PhaseContext& ctx,
                   double t, const std::vector<double>& x_grid,
                   const ProfileOpts& opts = {}, double rho = 0.2);

// least-squares slope of log e against log t over (t, e) samples
double decay_exponent_fit(const std::vector<std::pair<double, double>>& errors);

}  // namespace mch
