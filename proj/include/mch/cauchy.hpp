#pragma once
#include <vector>

#include "mch/common.hpp"
#include "mch/spline.hpp"

namespace mch {

// Closed-form Cauchy transforms of a cubic-spline interpolant f of (nodes, vals):
//   order 1: int f(s)/(s - z)   ds over [nodes.front(), nodes.back()]
//   order 2: int f(s)/(s - z)^2 ds
// For order 1 with real z strictly inside the range the principal value is
// returned (the log singularity cancels in |.|). Exact per interval: the cubic
// is expanded about w = s - z, so each term integrates to powers and logs.
cplx cauchy_integral(const CubicSpline& f, cplx z, int order = 1);
cplx cauchy_integral(const std::vector<double>& nodes,
                     const std::vector<double>& vals, cplx z, int order = 1);

}  // namespace mch
