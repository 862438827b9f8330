#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "mch/soliton.hpp"

using namespace mch;

namespace {

SolitonData circle_pair(double phi, double Ct = 1.0) {
  return make_soliton_data({{std::polar(1.0, phi), Ct, PoleKind::OnCircle}});
}

// crest location/height by parabolic refinement of the grid maximum
std::pair<double, double> crest(const std::vector<double>& x,
                                const std::vector<double>& u) {
  size_t j = 0;
  for (size_t i = 1; i < u.size(); ++i)
    if (u[i] > u[j]) j = i;
  REQUIRE(j > 0);
  REQUIRE(j + 1 < u.size());
  const double h = x[1] - x[0];
  const double d = 0.5 * (u[j + 1] - u[j - 1]) /
                   (2 * u[j] - u[j - 1] - u[j + 1]);
  return {x[j] + d * h,
          u[j] + 0.25 * d * (u[j + 1] - u[j - 1])};
}

}  // namespace

TEST_CASE("smooth circle soliton obeys the amplitude and speed laws") {
  // phi = 5pi/6 lies in the smooth band: height 2|tan phi|, speed 2/cos^2 phi
  const double phi = 5 * pi / 6;
  const SolitonData data = circle_pair(phi);
  const auto xs0 = linspace(-10.0, 10.0, 4001);
  const auto u0 = profile_on_x_grid(data, 0.0, xs0);
  const auto [x0, peak] = crest(xs0, u0);
  CHECK(std::abs(peak - 2.0 / std::sqrt(3.0)) < 1e-4);

  const auto xs1 = linspace(-4.0, 16.0, 4001);
  const auto u1 = profile_on_x_grid(data, 3.0, xs1);
  const auto [x1, peak1] = crest(xs1, u1);
  CHECK(std::abs(peak1 - peak) < 1e-6);            // shape travels rigidly
  CHECK(std::abs((x1 - x0) / 3.0 - 8.0 / 3.0) < 1e-3);
}

TEST_CASE("random residue systems solve to the residue conditions") {
  std::mt19937 rng(2026);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double y = 0.37, t = 0.81;
  for (int trial = 0; trial < 100; ++trial) {
    const int ng = 1 + static_cast<int>(uni(rng) * 3.0);
    std::vector<Generator> gens;
    for (int g = 0; g < ng; ++g) {
      if (uni(rng) < 0.5) {
        const double mod = 1.15 + 0.75 * uni(rng);
        const double arg = 0.15 + 1.2 * uni(rng);
        const double cmod = 0.3 + 2.2 * uni(rng);
        const double carg = 2 * pi * uni(rng);
        gens.push_back(
            {std::polar(mod, arg), std::polar(cmod, carg), PoleKind::OffCircle});
      } else {
        double a = 0.3 + (pi - 0.6) * uni(rng);
        if (std::abs(a - pi / 2) < 0.1) a += 0.25;  // keep clear of i
        gens.push_back(
            {std::polar(1.0, a), cplx{0.3 + 2.2 * uni(rng), 0.0}, PoleKind::OnCircle});
      }
    }
    const SolitonData data = make_soliton_data(gens);
    const SolitonState st = assemble_and_solve(data, y, t);
    CHECK(residue_check(st, data) < 1e-10);
    CHECK(st.dual_gap < 1e-6);
    CHECK(std::isfinite(st.u_r));
    CHECK(std::isfinite(st.c_plus));
  }
}

TEST_CASE("solved ansatz has unit determinant and identity tail") {
  const SolitonData data = make_soliton_data(
      {{std::polar(1.5, pi / 3), cplx{0.4, -0.7}, PoleKind::OffCircle},
       {std::polar(1.0, 3 * pi / 4), cplx{0.8, 0.0}, PoleKind::OnCircle}});
  const SolitonState st = assemble_and_solve(data, 0.3, 0.2);
  for (cplx z : {cplx{0.9, 0.3}, cplx{-1.2, 0.8}, cplx{2.5, -1.1}, cplx{0.3, 2.2}}) {
    CHECK(std::abs(eval_M(st, data, z).det() - 1.0) < 1e-8);
  }
  const Mat2 far = eval_M(st, data, cplx{1e6, 1e6});
  CHECK(std::abs(far.a00 - 1.0) < 1e-4);
  CHECK(std::abs(far.a11 - 1.0) < 1e-4);
  CHECK(std::abs(far.a01) < 1e-4);
  CHECK(std::abs(far.a10) < 1e-4);
  CHECK_THROWS_AS((void)eval_M(st, data, std::polar(1.5, pi / 3)), NumericError);
}

TEST_CASE("residue factors match first principles") {
  const cplx w = std::polar(1.0, 5 * pi / 6);
  const cplx Ct{0.7, 0.0};
  const SolitonData data = make_soliton_data({{w, Ct, PoleKind::OnCircle}});
  CHECK(std::abs(data.spec.expanded[0].C - (-I * w * Ct)) < 1e-15);
  const double y = 1.3, t = 0.6;
  const SolitonState st = assemble_and_solve(data, y, t);
  const auto [k, lam] = uniformize(w);
  const cplx want = -I * w * Ct * std::exp(k * (y - 2.0 * t / (lam * lam)));
  CHECK(std::abs(st.gamma[0] - want) < 1e-14 * std::abs(want));
}

TEST_CASE("time translation is a constant rescaling") {
  // gamma picks up exp(-2 i theta(zeta; 0) dt), so advancing t by 1 equals
  // rescaling every constant by that factor at the old time
  const std::vector<Generator> gens{
      {std::polar(1.4, 0.9), cplx{1.1, 0.5}, PoleKind::OffCircle},
      {std::polar(1.0, 5 * pi / 6), cplx{0.9, 0.0}, PoleKind::OnCircle}};
  std::vector<Generator> shifted = gens;
  for (auto& g : shifted) g.Ct *= std::exp(-2.0 * I * theta(g.zeta, 0.0));
  const SolitonData a = make_soliton_data(gens);
  const SolitonData b = make_soliton_data(shifted);
  for (double y : {-2.0, 0.4, 3.1}) {
    const SolitonState sa = assemble_and_solve(a, y, 1.7);
    const SolitonState sb = assemble_and_solve(b, y, 0.7);
    CHECK(std::abs(sa.u_r - sb.u_r) < 1e-9);
    CHECK(std::abs(sa.c_plus - sb.c_plus) < 1e-9);
  }
}

TEST_CASE("profiles decay and the empty system is the vacuum") {
  const SolitonData data = circle_pair(5 * pi / 6);
  CHECK(std::abs(assemble_and_solve(data, 50.0, 0.0).u_r) < 1e-8);
  CHECK(std::abs(assemble_and_solve(data, -50.0, 0.0).u_r) < 1e-8);

  const SolitonData none = make_soliton_data({});
  const SolitonState st = assemble_and_solve(none, 0.8, 1.2);
  CHECK(st.u_r == 0.0);
  CHECK(st.c_plus == 0.0);
  CHECK(st.x_of_y == 0.8);
  const auto u = profile_on_x_grid(none, 1.0, linspace(-5.0, 5.0, 11));
  for (double v : u) CHECK(v == 0.0);
}

TEST_CASE("coordinate shift saturates behind the soliton") {
  // c_plus(y) -> -2 ln((1 - sin phi)/(1 + sin phi)) as y -> -inf
  const SolitonData data = circle_pair(3 * pi / 4);
  const double limit = -2.0 * std::log(3.0 - 2.0 * std::sqrt(2.0));
  CHECK(std::abs(assemble_and_solve(data, -25.0, 0.0).c_plus - limit) < 1e-5);
  CHECK(std::abs(assemble_and_solve(data, 25.0, 0.0).c_plus) < 1e-5);
}

TEST_CASE("gamma window bounds the residue factors") {
  const SolitonData data = circle_pair(5 * pi / 6);  // Re k = -1/2, v = 8/3
  SUBCASE("window edge sits where |gamma| meets the cap") {
    const auto [lo, hi] = gamma_window(data, 0.0, 1e6);
    CHECK(std::isinf(hi));  // gamma decays to the right for every pole
    CHECK(std::abs(lo - (-2.0 * std::log(1e6))) < 1e-12);
    const SolitonState st = assemble_and_solve(data, lo, 0.0);
    CHECK(std::abs(st.gamma[0]) / 1e6 == doctest::Approx(1.0).epsilon(1e-9));
    const SolitonState past = assemble_and_solve(data, lo - 1.0, 0.0);
    CHECK(std::abs(past.gamma[0]) > 1e6);
  }
  SUBCASE("window drifts with the soliton speed") {
    const auto [lo0, hi0] = gamma_window(data, 0.0, 1e6);
    const auto [lo1, hi1] = gamma_window(data, 1.0, 1e6);
    CHECK(std::abs((lo1 - lo0) - 8.0 / 3.0) < 1e-12);
  }
}

TEST_CASE("x-grid handling outside the y-image") {
  const SolitonData data = circle_pair(5 * pi / 6);
  SUBCASE("tiny window with live tails is an error") {
    ProfileOpts opts;
    opts.ywin = 2.0;
    CHECK_THROWS_AS((void)profile_on_x_grid(data, 0.0, {70.0}, opts), NumericError);
  }
  SUBCASE("dead tails zero-fill exactly") {
    const auto u = profile_on_x_grid(data, 0.0, {-70.0, 0.0, 70.0});
    CHECK(u[0] == 0.0);
    CHECK(u[2] == 0.0);
    CHECK(u[1] > 0.1);
  }
}

TEST_CASE("cuspon-range circle data breaks the coordinate map") {
  // phi = pi/3 is below the smooth band: min dx/dy = cos 2phi < 0
  const SolitonData data = circle_pair(pi / 3);
  CHECK_THROWS_AS((void)profile_on_x_grid(data, 0.0, linspace(-5.0, 5.0, 21)),
                  NumericError);
}
