#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "mch/phase.hpp"

using namespace mch;

TEST_CASE("uniformization map") {
  const auto [k, lam] = uniformize(cplx{2.0, 0.0});
  CHECK(std::abs(k - cplx{0.0, 0.75}) < 1e-15);
  CHECK(std::abs(lam - cplx{1.25, 0.0}) < 1e-15);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const cplx z{U(rng), U(rng)};
    if (std::abs(z) < 0.05) continue;
    const cplx kk = k_of(z), ll = lam_of(z);
    CHECK(std::abs(kk * kk + ll * ll - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS((void)uniformize(cplx{0.0, 0.0}), NumericError);
}

TEST_CASE("phase symmetries across the orbit") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-3.0, 3.0), X(-4.0, 5.0);
  int tested = 0;
  while (tested < 10000) {
    const cplx z{U(rng), U(rng)};
    if (std::abs(z) < 0.1 || std::abs(z - I) < 0.1 || std::abs(z + I) < 0.1)
      continue;
    const double xi = X(rng);
    const cplx th = theta(z, xi);
    const double scale = std::max(1.0, std::abs(th));
    CHECK(std::abs(theta(-std::conj(z), xi) + std::conj(th)) / scale < 1e-12);
    CHECK(std::abs(theta(1.0 / std::conj(z), xi) + std::conj(th)) / scale <
          1e-12);
    CHECK(std::abs(theta(-1.0 / z, xi) - th) / scale < 1e-12);
    ++tested;
  }
}

TEST_CASE("im_theta dual path and circle reduction") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.1, 3.0), A(0.1, pi - 0.1),
      X(-4.0, 5.0);
  for (int i = 0; i < 2000; ++i) {
    const cplx z = std::polar(U(rng), A(rng));
    if (std::abs(z - I) < 0.05) continue;
    const double xi = X(rng);
    CHECK(std::abs(im_theta(z, xi) - theta(z, xi).imag()) /
              std::max(1.0, std::abs(theta(z, xi))) <
          1e-12);
  }
  // on the circle z = e^{i phi}: Im theta = -(sin phi / 2)(xi - 2/cos^2 phi)
  for (int i = 0; i < 500; ++i) {
    const double phi = A(rng);
    if (std::abs(phi - pi / 2) < 0.05) continue;
    const double xi = X(rng);
    const double c = std::cos(phi);
    const double ref = -(std::sin(phi) / 2.0) * (xi - 2.0 / (c * c));
    CHECK(std::abs(im_theta(std::polar(1.0, phi), xi) - ref) /
              std::max(1.0, std::abs(ref)) <
          1e-11);
  }
}

TEST_CASE("wave speed against the phase identity") {
  // Im theta = (Re k / 2)(xi - v) for any xi
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(0.2, 3.0), A(0.1, pi - 0.1),
      X(-4.0, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const cplx z = std::polar(U(rng), A(rng));
    if (std::abs(z - I) < 0.05 || std::abs(z.real()) < 0.05) continue;
    const double xi = X(rng);
    const double rk = k_of(z).real();
    CHECK(std::abs(im_theta(z, xi) - 0.5 * rk * (xi - wave_speed(z))) /
              std::max(1.0, std::abs(im_theta(z, xi))) <
          1e-10);
  }
  // circle speed 2/cos^2 phi
  const double phi = 2.5;
  CHECK(std::abs(wave_speed(std::polar(1.0, phi)) -
                 2.0 / (std::cos(phi) * std::cos(phi))) < 1e-12);
}

TEST_CASE("orbit expansion") {
  SUBCASE("off-circle quartet with its constants") {
    const cplx z = std::polar(1.5, pi / 3);
    const cplx c{0.4, -0.7};
    const auto spec = expand_spectrum({{z, c, PoleKind::OffCircle}});
    REQUIRE(spec.expanded.size() == 4);
    const cplx zb = std::conj(z);
    const cplx want_z[4] = {z, -zb, 1.0 / zb, -1.0 / z};
    const cplx want_c[4] = {c, std::conj(c),
                            -std::conj(c) / (zb * zb), -c / (z * z)};
    for (int j = 0; j < 4; ++j) {
      CHECK(std::abs(spec.expanded[j].zeta - want_z[j]) < 1e-14);
      CHECK(std::abs(spec.expanded[j].C - want_c[j]) < 1e-14);
    }
  }
  SUBCASE("on-circle pair") {
    const cplx w = std::polar(1.0, 3 * pi / 4);
    const cplx c{1.0, 0.0};
    const auto spec = expand_spectrum({{w, c, PoleKind::OnCircle}});
    REQUIRE(spec.expanded.size() == 2);
    CHECK(std::abs(spec.expanded[0].zeta - w) < 1e-14);
    CHECK(std::abs(spec.expanded[1].zeta + std::conj(w)) < 1e-14);
    CHECK(std::abs(spec.expanded[1].C - std::conj(c)) < 1e-14);
    CHECK(spec.orbit_len(0) == 2);
  }
  SUBCASE("degenerate generators are rejected") {
    CHECK_THROWS_AS(
        (void)expand_spectrum({{cplx{0.0, 2.0}, cplx{1.0, 0.0},
                                PoleKind::OffCircle}}),
        ConfigError);  // imaginary axis: -conj z = z
    CHECK_THROWS_AS(
        (void)expand_spectrum({{cplx{2.0, 1e-12}, cplx{1.0, 0.0},
                                PoleKind::OffCircle}}),
        ConfigError);  // not in C+ enough: real-axis exclusion
    CHECK_THROWS_AS(
        (void)expand_spectrum({{I, cplx{1.0, 0.0}, PoleKind::OnCircle}}),
        ConfigError);  // z = i excluded
    CHECK_THROWS_AS(
        (void)expand_spectrum({{std::polar(1.5, pi / 3), cplx{0.0, 0.0},
                                PoleKind::OffCircle}}),
        ConfigError);  // zero constant
  }
}

TEST_CASE("partition of the discrete spectrum") {
  // at xi = 4 the circle pole at 3pi/4 travels at v = 2/cos^2(3pi/4) = 4:
  // exactly critical, so it lands in Lambda
  const auto ctx = PhaseContext::make(4.0, 0.05);
  const cplx w = std::polar(1.0, 3 * pi / 4);
  const cplx zq = std::polar(1.5, pi / 3);
  const auto spec = expand_spectrum({{w, cplx{1.0, 0.0}, PoleKind::OnCircle},
                                     {zq, cplx{0.3, 0.1}, PoleKind::OffCircle}});
  const auto part = partition_spectrum(spec, ctx);
  REQUIRE(part.lambda.size() == 1);
  CHECK(part.lambda[0] == 0);
  CHECK(part.nabla.size() + part.delta.size() == 1);
  CHECK(part.rho0 > 0);

  // every member of an orbit carries the same sign of Im theta
  for (size_t g = 0; g < spec.generators.size(); ++g) {
    const double s0 = im_theta(spec.expanded[spec.orbit_start[g]].zeta, ctx);
    for (int j = 1; j < spec.orbit_len(static_cast<int>(g)); ++j) {
      const double sj =
          im_theta(spec.expanded[spec.orbit_start[g] + j].zeta, ctx);
      CHECK(s0 * sj > 0.0 - 1e-18);
      if (g == 0) CHECK(std::abs(sj) < 1e-10);
    }
  }

  // rho0 equals the smallest |Im theta| over the traded orbits
  double lo = 1e300;
  for (int j = 0; j < 4; ++j)
    lo = std::min(lo,
                  std::abs(im_theta(spec.expanded[spec.orbit_start[1] + j].zeta,
                                    ctx)));
  CHECK(std::abs(part.rho0 - lo) < 1e-14);
}

TEST_CASE("regime construction") {
  CHECK(PhaseContext::make(-1.0, 0.05).regime == Regime::Left);
  CHECK(PhaseContext::make(-0.3, 0.05).regime == Regime::Left);
  CHECK(PhaseContext::make(2.5, 0.05).regime == Regime::Right);
  CHECK_THROWS_AS((void)PhaseContext::make(0.0, 0.05), ConfigError);
  CHECK_THROWS_AS((void)PhaseContext::make(1.9, 0.05), ConfigError);
  CHECK_THROWS_AS((void)PhaseContext::make(-1.0, 0.0), ConfigError);
}

TEST_CASE("sector bounds") {
  SUBCASE("left regime") {
    const auto ctx = PhaseContext::make(-0.3, 0.05);
    const auto rep = check_sector_bound(ctx, pi / 32, 20000, 7);
    CHECK(rep.violations == 0);
    CHECK(rep.margin >= 0);
  }
  SUBCASE("left bound needs a narrow aperture at the band edge") {
    // at xi = -1/4 - delta0 the bound fails beyond ~0.11 rad (near l = 3.7,
    // e.g. z = 4 e^{i pi/16}), so pi/16 must report violations
    const auto ctx = PhaseContext::make(-0.3, 0.05);
    const auto rep = check_sector_bound(ctx, pi / 16, 20000, 7);
    CHECK(rep.violations > 0);
    CHECK(rep.margin < 0);
  }
  SUBCASE("right regime") {
    const auto ctx = PhaseContext::make(2.5, 0.05);
    const auto rep = check_sector_bound(ctx, pi / 16, 20000, 7);
    CHECK(rep.violations == 0);
    CHECK(rep.margin > 0);
  }
  SUBCASE("aperture admissibility in the right regime") {
    // cos 2phi >= 2/xi fails for xi barely above 2 at phi = pi/16
    const auto ctx = PhaseContext::make(2.05, 0.05);
    CHECK_THROWS_AS((void)check_sector_bound(ctx, pi / 16, 100, 1),
                    ConfigError);
  }
  SUBCASE("aperture range") {
    const auto ctx = PhaseContext::make(-1.0, 0.05);
    CHECK_THROWS_AS((void)check_sector_bound(ctx, pi / 2, 100, 1), ConfigError);
  }
}

TEST_CASE("signature grid marks punctures and both signs") {
  const auto ctx = PhaseContext::make(-1.0, 0.05);
  const auto g = signature_grid(ctx, {-2.0, 2.0, 0.0, 2.0}, 81);
  bool punct = false, plus = false, minus = false;
  for (int8_t s : g.sign) {
    if (s == 2) punct = true;
    if (s == 1) plus = true;
    if (s == -1) minus = true;
  }
  CHECK(punct);  // z = i and z = 0 lie on the window
  CHECK(plus);
  CHECK(minus);
}
