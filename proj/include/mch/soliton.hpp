#pragma once
#include <utility>
#include <vector>

#include "mch/common.hpp"
#include "mch/phase.hpp"

namespace mch {

// engine-level generator: pole in C+ with the engine norming constant Ct;
// the residue-level constant used in the orbit expansion is c = -i zeta Ct
struct Generator {
  cplx zeta;
  cplx Ct;
  PoleKind kind;
};

struct SolitonData {
  std::vector<Generator> generators;
  DiscreteSpectrum spec;  // expanded orbit carrying the residue constants
  int N = 0;              // expanded pole count; the linear system is 2N x 2N
};

SolitonData make_soliton_data(const std::vector<Generator>& gens,
                              double tol = 1e-8);

struct SolitonState {
  double y = 0, t = 0;
  std::vector<cplx> beta, sigma;  // partial-fraction coefficients
  std::vector<cplx> gamma;        // c_k exp(k(zeta_k)(y - 2t/lambda_k^2))
  double u_r = 0, c_plus = 0, x_of_y = 0;
  double cond = 1.0;      // condition number of the solved system
  double dual_gap = 0.0;  // closed-form vs numeric-limit reconstruction gap
};

struct SolveOpts {
  double cond_max = 1e12;
  double dual_tol = 1e-6;  // agreement of the two reconstruction paths
};

// impose the residue conditions on the partial-fraction ansatz, solve the
// 2N system, and fill the reconstruction fields (u_r, c_plus, x_of_y)
SolitonState assemble_and_solve(const SolitonData& data, double y, double t,
                                const SolveOpts& opts = {});

// the ansatz M = I + sum_k [[beta/(z-zeta), -conj(sigma)/(z-conj zeta)],
//                           [sigma/(z-zeta), conj(beta)/(z-conj zeta)]]
Mat2 eval_M(const SolitonState& st, const SolitonData& data, cplx z);

// max Frobenius-scale defect of the four residue conditions at every pole,
// each scaled by max(1, |gamma_k|)
double residue_check(const SolitonState& st, const SolitonData& data);

// closed-form reconstruction with the always-on numeric z -> i limit
// cross-check; sets st.u_r and st.dual_gap, returns u_r
double reconstruct_u(SolitonState& st, const SolitonData& data,
                     const SolveOpts& opts = {});

// c_plus = -ln(g(i)/f(i)) with f = M11 + M21, g = M12 + M22; x = y + c_plus
std::pair<double, double> coordinate_map(SolitonState& st,
                                         const SolitonData& data,
                                         const SolveOpts& opts = {});

// y-interval on which every |gamma_k(y)| stays below cap at time t
std::pair<double, double> gamma_window(const SolitonData& data, double t,
                                       double cap);

struct ProfileOpts {
  double ywin = 60.0;        // sweep restricted to |y| <= ywin
  double gamma_cap = 1e9;    // residue-factor magnitude cap for the window
  double tail_tol = 1e-8;    // grid nodes beyond the y-image get 0 if the
                             // edge value is already below this
  double sweep_step = 0.01;  // dense y-sweep resolution
  SolveOpts solve{};
};

// parametric-to-physical resampling: dense y-sweep of (x(y,t), u(y,t)),
// monotonicity check on x(y), root-bracketed inversion per x node
std::vector<double> profile_on_x_grid(const SolitonData& data, double t,
                                      const std::vector<double>& x_grid,
                                      const ProfileOpts& opts = {});

}  // namespace mch
