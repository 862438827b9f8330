#pragma once
#include <vector>

#include "mch/common.hpp"

namespace mch {

// periodic pseudospectral state: x_j = -L/2 + L j/n, m = u - u_xx spectrally
struct FieldGrid {
  double L = 0;
  int n = 0;
  std::vector<double> x, u, m;
};

void validate_grid(double L, int n);  // n a power of two, L > 0
FieldGrid make_grid(double L, int n);
FieldGrid grid_from_u(double L, std::vector<double> u);
FieldGrid grid_from_m(double L, std::vector<double> m);

// spectral solve of (1 - d^2/dx^2) u = m
std::vector<double> helmholtz_invert(const std::vector<double>& m, double L);
std::vector<double> spectral_deriv(const std::vector<double>& f, double L);

// flux form -d/dx( m (u^2 - u_x^2) ) - 2 u_x with 2/3-dealiased product
std::vector<double> pde_rhs(const FieldGrid& g);

struct EvolveOpts {
  double blowup_factor = 1e3;  // sup-norm growth beyond this aborts
  double cfl_c = 1.0;          // requires dt <= cfl_c h / max|u^2 - u_x^2|
  int check_every = 25;        // cadence of blow-up checks
};
struct EvolveDiag {
  double mass_drift_rel = 0;  // relative drift of the conserved integral of m
  double umax = 0;
  int steps = 0;
};

// fixed-step classical RK4 on the spectrum of m; u refreshed every stage
FieldGrid evolve(const FieldGrid& g0, double t_end, double dt,
                 const EvolveOpts& opts = {}, EvolveDiag* diag = nullptr);

// relative L2 residual of m_t + (m(u^2-u_x^2))_x + 2 u_x over >= 3 u-slices
// equispaced in time (central difference in t, spectral in x)
double pde_residual(const std::vector<std::vector<double>>& u_slices, double dt,
                    double L);

}  // namespace mch
