#pragma once
#include <cstdint>
#include <utility>
#include <vector>

#include "mch/common.hpp"

namespace mch {

// uniformization: k = (i/2)(z - 1/z), lambda = (1/2)(z + 1/z); k^2 + lambda^2 = 1
std::pair<cplx, cplx> uniformize(cplx z);
cplx k_of(cplx z);
cplx lam_of(cplx z);

enum class Regime { Left, Right };

// ratio xi = y/t with the regime margin; construction outside the two bands
// xi <= -1/4 - delta0 (Left) and xi >= 2 + delta0 (Right) is rejected.
struct PhaseContext {
  double xi;
  double delta0;
  Regime regime;
  static PhaseContext make(double xi, double delta0);
};

// theta(z; xi) = -(1/4)(z - 1/z)[xi - 8/(z + 1/z)^2]; singular at 0, +-i
cplx theta(cplx z, double xi);
inline cplx theta(cplx z, const PhaseContext& ctx) { return theta(z, ctx.xi); }
double im_theta(cplx z, double xi);
inline double im_theta(cplx z, const PhaseContext& ctx) {
  return im_theta(z, ctx.xi);
}
// group velocity of the pole at z: v(z) = 2 Re(k/lambda^2)/Re k. The residue
// exponent is k(z)(y - 2t/lambda^2) = -2it theta, whence
// Im theta = (Re k / 2)(xi - v); Re k < 0 in C+, so v > xi <=> Im theta > 0.
double wave_speed(cplx z);

enum class PoleKind { OffCircle, OnCircle };

struct SpectralPoint {
  cplx zeta;      // pole in C+
  cplx C;         // norming constant: residue-level inside expanded orbits,
                  // generator-level when carried by scattering data
  PoleKind kind;  // OffCircle: |zeta| > 1 generator; OnCircle: |zeta| = 1
};

// generator validity: C+ with the degeneracy exclusions (not near i, the real
// axis, or the imaginary axis), off-circle generators strictly outside the
// unit circle
void validate_generator(const SpectralPoint& g, double tol = 1e-8);

struct DiscreteSpectrum {
  std::vector<SpectralPoint> generators;
  std::vector<SpectralPoint> expanded;  // 4 per off-circle + 2 per on-circle
  std::vector<int> orbit_start;         // offset of each generator's orbit
  int orbit_len(int g) const {
    return generators[g].kind == PoleKind::OffCircle ? 4 : 2;
  }
};

// orbit expansion: off-circle z -> {z, -conj z, 1/conj z, -1/z} with constants
// {c, conj c, -conj(z)^-2 conj c, -z^-2 c}; on-circle w -> {w, -conj w} with
// {c, conj c}. Degenerate (coincident within tol) orbits are rejected.
DiscreteSpectrum expand_spectrum(const std::vector<SpectralPoint>& generators,
                                 double tol = 1e-8);

struct Partition {
  std::vector<int> nabla;   // generator indices with Im theta < -band
  std::vector<int> delta;   // generator indices with Im theta > +band
  std::vector<int> lambda;  // generator indices with |Im theta| <= band
  double rho0 = 0.0;        // min |Im theta| over the members of traded
                            // (nabla/delta) orbits; 0 if both empty
};

// classifies whole orbits by their generator (members share Im theta);
// band: |Im theta| <= 1e-10 * max(1, |theta|) goes to lambda
Partition partition_spectrum(const DiscreteSpectrum& spec,
                             const PhaseContext& ctx);

struct SignGrid {
  int n;
  std::vector<double> re, im;   // n*n nodes, row-major over (im, re)
  std::vector<int8_t> sign;     // -1, 0, +1; +2 marks punctured (singular) nodes
};
struct Rect {
  double re_lo, re_hi, im_lo, im_hi;
};
SignGrid signature_grid(const PhaseContext& ctx, const Rect& window, int n,
                        double tol = 1e-9);

struct SectorReport {
  long violations;
  double margin;  // Left: min(Im theta - (delta0/4) Im z); Right: fitted c
};
// Left: checks Im theta >= (delta0/4) Im z on the sectors arg z in [0, phi]
// and [pi - phi, pi]; Right: fits c = min(-Im theta / Im z) over the samples
// (requires cos 2 phi >= 2/xi) and reports it as the margin; c > 0 certifies
// Im theta <= -c Im z on the sampled sectors. Samples are log-uniform in |z|.
SectorReport check_sector_bound(const PhaseContext& ctx, double phi,
                                long samples, uint64_t seed,
                                double l_min = 0.02, double l_max = 50.0);

}  // namespace mch
