#include "mch/predict.hpp"

#include <cmath>

namespace mch {

Prediction predict(const ScatteringData& sdata, const PhaseContext& ctx,
                   double t, const std::vector<double>& x_grid,
                   const ProfileOpts& opts, double rho) {
  if (!(t > 0)) throw ConfigError("predict: need t > 0");
  if (!(rho > 0 && rho < 0.25)) throw ConfigError("predict: rho outside (0, 1/4)");
  Prediction pred;
  pred.ctx = ctx;
  pred.rho = rho;
  pred.x_grid = x_grid;

  // classify the generators; positions alone decide the partition
  const DiscreteSpectrum spec = expand_spectrum(sdata.spectrum.generators);
  const Partition part = partition_spectrum(spec, ctx);
  pred.rho0 = part.rho0;
  pred.lambda_idx = part.lambda;

  const TFunction T =
      TFunction::make(ctx, spec, part, sdata.z_grid, sdata.r);
  pred.T_i = T.at_i();
  const cplx shift_c = 2.0 * std::log(pred.T_i);
  if (std::abs(shift_c.imag()) > 1e-8)
    throw NumericError("predict: frame shift is not real");
  pred.shift = shift_c.real();

  std::vector<Generator> lgens;
  for (int gi : part.lambda) {
    const auto& g = sdata.spectrum.generators[gi];
    const cplx tz = T(g.zeta);
    lgens.push_back({g.zeta, g.C * tz * tz, g.kind});
  }
  pred.lambda_data = make_soliton_data(lgens);

  // u_pred(x) = u_engine(x + shift): the engine frame sits 2 ln T(i) ahead
  std::vector<double> shifted(x_grid.size());
  for (size_t i = 0; i < x_grid.size(); ++i) shifted[i] = x_grid[i] + pred.shift;
  pred.u_pred = profile_on_x_grid(pred.lambda_data, t, shifted, opts);
  return pred;
}

double decay_exponent_fit(const std::vector<std::pair<double, double>>& errors) {
  if (errors.size() < 3)
    throw ConfigError("decay fit: need at least 3 samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(errors.size());
  double prev_t = 0;
  for (int i = 0; i < n; ++i) {
    const auto [t, e] = errors[i];
    if (!(t > 0) || !(e > 0))
      throw ConfigError("decay fit: samples must be positive");
    if (i > 0 && !(t > prev_t))
      throw ConfigError("decay fit: times must increase");
    prev_t = t;
    const double lx = std::log(t), ly = std::log(e);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-12 * n * sxx)
    throw ConfigError("decay fit: degenerate time spread");
  return (n * sxy - sx * sy) / denom;
}

}  // namespace mch
