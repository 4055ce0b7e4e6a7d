// Period engine: E-integrals against a brute-force oracle, monotonicity, the
// family solver, reduction identities, direct cycle periods, the torus period
// constant, torque laws and axis balance.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "minsurf/catalog.hpp"
#include "minsurf/period.hpp"

using namespace minsurf;

namespace {

// Independent oracle for the E-integrals: composite midpoint rule directly in
// phi (no endpoint substitution). The sqrt singularity is integrable; 2e6
// panels give ~1e-7, enough to catch any substitution or sign bug.
double E_bruteforce(int k, double gamma, double a_coef) {
  const int n = 2'000'000;
  const double h = gamma / n;
  double sum = 0;
  for (int i = 0; i < n; ++i) {
    const double phi = (i + 0.5) * h;
    const double d = std::cos(phi) * std::cos(phi) - std::cos(gamma) * std::cos(gamma);
    sum += std::sqrt(std::max(0.0, d)) * std::cos(a_coef * phi);
  }
  return sum * h;
}

}  // namespace

TEST_CASE("E-integrals agree with the brute-force midpoint oracle") {
  for (int k : {2, 4}) {
    for (double g : {0.8, 1.3}) {
      const EPair e = E_integrals(k, g);
      CHECK(std::fabs(e.plus - E_bruteforce(k, g, 1.0 + 2.0 / k)) < 1e-6);
      CHECK(std::fabs(e.minus - E_bruteforce(k, g, 1.0 - 2.0 / k)) < 1e-6);
    }
  }
}

TEST_CASE("E+/E- is strictly decreasing with the right endpoint limits") {
  for (int k = 2; k <= 6; ++k) {
    const MonotonicityReport r = verify_monotonicity(k, 100);
    CHECK(r.ok);
    CHECK(r.violations == 0);
    CHECK(std::fabs(r.ratio_left - 1.0) < 1e-3);
    CHECK(std::fabs(r.ratio_right - double(k - 1) / (k + 1)) < 1e-3);
  }
}

TEST_CASE("family solver: compatibility, consistency, limits") {
  for (int k = 2; k <= 6; ++k) {
    for (int i = 0; i < 20; ++i) {
      const double a = kPi / 4 + (kPi / 2 - 0.05 - kPi / 4) * i / 19.0;
      const FamilySolution s = solve_family(k, a);
      CHECK(s.compatibility_residual < 1e-10);
      CHECK(s.rho_consistency < 1e-9);
      CHECK(std::fabs(s.growth_bottom + s.growth_middle + s.growth_top) < 1e-10);
      if (s.m > 0) CHECK(1.0 / s.m > 2.0 / s.x + s.x);
    }
    CHECK(std::fabs(solve_family(k, kPi / 4).m) < 1e-8);
  }
}

TEST_CASE("family solver rejects out-of-range input") {
  CHECK_THROWS_AS(solve_family(1, 1.0), error);
  CHECK_THROWS_AS(solve_family(2, 0.5), error);   // below pi/4
  CHECK_THROWS_AS(solve_family(2, kPi / 2), error);
}

TEST_CASE("reduction identities: direct contour integrals match closed forms") {
  const double params[][2] = {{2, kPi / 4}, {2, 1.0}, {3, 0.9}, {3, 1.3}, {4, 1.0}, {5, 1.1}};
  for (const auto& pa : params) {
    const int k = int(pa[0]);
    const FamilySolution s = solve_family(k, pa[1]);
    const ReductionReport r = verify_reduction_identities(k, pa[1], s.m);
    CHECK(r.max_rel_err < 1e-8);
  }
}

TEST_CASE("direct quadrature oracle: gamma1/gamma2 periods of solved surfaces vanish") {
  std::mt19937 rng(20240817);
  std::uniform_int_distribution<int> kd(2, 6);
  std::uniform_real_distribution<double> ad(kPi / 4 + 0.01, kPi / 2 - 0.06);
  for (int trial = 0; trial < 6; ++trial) {
    const int k = kd(rng);
    const double a = ad(rng);
    const FamilySolution s = solve_family(k, a);
    const vec3 p1 = mkx_cycle_period_direct(k, a, s.m, s.rho, cycle_label::gamma1);
    const vec3 p2 = mkx_cycle_period_direct(k, a, s.m, s.rho, cycle_label::gamma2);
    CHECK(p1.norm_inf() < 1e-7);
    CHECK(p2.norm_inf() < 1e-7);
  }
}

TEST_CASE("torus period constant closes the explicit torus cycles") {
  // a-cycle around the branch cut [-1, 0] and b-cycle around [0, 1]; with the
  // solved rho both real periods vanish, with a wrong rho they do not
  auto torus_period = [](double rho) {
    WeierstrassBundle b = make_surface("chen_gackstatter");
    b.g_eval = [rho](const SurfacePoint& p) { return rho * p.u; };
    const Cycle a = detail::tracked_loop(b.domain, cplx(-0.5, 0), 0.75, 1, false);
    const Cycle bb = detail::tracked_loop(b.domain, cplx(0.5, 0), 0.75, 1, false);
    return std::max(integrate_phi(b, a.path, 1e-12).real().norm_inf(),
                    integrate_phi(b, bb.path, 1e-12).real().norm_inf());
  };
  const double rho = chen_gackstatter_rho();
  CHECK(torus_period(rho) < 1e-10);
  CHECK(torus_period(rho * 1.01) > 1e-3);
  CHECK(torus_period(std::sqrt(2.0)) > 0.1);
}

TEST_CASE("torus period constant agrees with a golden-section search") {
  // minimize the a-cycle period norm over rho: the optimum must coincide with
  // the closed-form sqrt(I1/I2)
  WeierstrassBundle base = make_surface("chen_gackstatter");
  auto pnorm = [&](double rho) {
    WeierstrassBundle b = base;
    b.g_eval = [rho](const SurfacePoint& p) { return rho * p.u; };
    const Cycle a = detail::tracked_loop(b.domain, cplx(-0.5, 0), 0.75, 1, false);
    return integrate_phi(b, a.path, 1e-11).real().norm_inf();
  };
  const double found = golden_min(pnorm, 1.0, 1.5, 1e-9);
  CHECK(std::fabs(found - chen_gackstatter_rho()) < 1e-6);
}

TEST_CASE("flux of embedded catalog ends is vertical with |f3| = 2 pi growth") {
  for (const char* name : {"catenoid", "mkx", "mk"}) {
    const WeierstrassBundle b = make_surface(name);
    for (const Cycle& c : b.basis) {
      if (c.label != cycle_label::end_loop) continue;
      const PunctureInfo* p = b.find_puncture(c.puncture);
      const vec3 f = flux(b, c);
      CHECK(std::fabs(f.x) < 1e-9);
      CHECK(std::fabs(f.y) < 1e-9);
      // the disk-coordinate growth rate is chart_winding times the chart one
      const double growth =
          residue_and_growth(b, c.puncture).growth * c.chart_winding;
      CHECK(std::fabs(std::fabs(f.z) - 2 * kPi * std::fabs(growth)) < 1e-8);
      (void)p;
    }
  }
}

TEST_CASE("torque base-shift law T_W = T_0 - W x F") {
  const WeierstrassBundle b = make_surface("catenoid");
  const Cycle& loop = b.basis.front();
  const vec3 T0 = torque(b, loop, vec3{0, 0, 0});
  const vec3 F = flux(b, loop);
  const vec3 W{0.7, -1.3, 0.4};
  const vec3 TW = torque(b, loop, W);
  CHECK((TW - (T0 - W.cross(F))).norm() < 1e-8);
}

TEST_CASE("axis balance: sum of growth-weighted end axes vanishes") {
  for (double a : {kPi / 4 + 0.05, 1.0}) {
    const WeierstrassBundle b = make_surface("mkx", {{"k", 2}, {"alpha", a}});
    const auto axes = balanced_end_axes(b);
    REQUIRE(axes.size() >= 2);
    vec3 sum{0, 0, 0};
    for (const EndAxis& ea : axes) {
      const double growth = residue_and_growth(b, ea.puncture).growth;
      sum += ea.W * growth;
    }
    CHECK(sum.norm() < 1e-6);
  }
}

TEST_CASE("flat ends have no axis") {
  // alpha = pi/4 makes the middle end flat; only the two catenoid ends report
  const WeierstrassBundle b = make_surface("mkx", {{"k", 2}, {"alpha", kPi / 4}});
  const auto axes = balanced_end_axes(b);
  CHECK(axes.size() == 2);
  for (const EndAxis& ea : axes) CHECK(ea.puncture != "middle");
}
