// Weierstrass layer: Phi evaluation, metric/curvature, transforms, residues.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "minsurf/catalog.hpp"
#include "minsurf/weierstrass.hpp"

using namespace minsurf;

namespace {

SurfacePoint at(const WeierstrassBundle& b, cplx z) {
  if (b.domain.kind == curve_kind::planar) return SurfacePoint{z, cplx(0, 0), std::nullopt};
  return lift_point(b.domain, z, b.domain.sheet_candidates(z).front());
}

ChartPath circle_path(cplx center, double radius, int n = 256) {
  ChartPath p;
  for (int i = 0; i <= n; ++i)
    p.samples.push_back(center + radius * std::exp(cplx(0, 2 * kPi * i / n)));
  p.closed = true;
  return p;
}

}  // namespace

TEST_CASE("Phi is a null curve: phi1^2 + phi2^2 + phi3^2 = 0") {
  const cplx zs[] = {{0.7, 0.2}, {-0.3, 1.1}, {2.1, -0.4}};
  for (const char* name : {"catenoid", "enneper", "chen_gackstatter", "mkx", "n_noid"}) {
    const WeierstrassBundle b = make_surface(name);
    for (cplx z : zs) {
      const cvec3 phi = eval_phi(b, at(b, z));
      const cplx null = phi.x * phi.x + phi.y * phi.y + phi.z * phi.z;
      const double scale = std::norm(phi.x) + std::norm(phi.y) + std::norm(phi.z);
      CHECK(std::abs(null) < 1e-10 * std::max(1.0, scale));
    }
  }
}

TEST_CASE("normal_from_g is the inverse stereographic image") {
  CHECK((normal_from_g(cplx(0, 0)) - vec3{0, 0, -1}).norm() < 1e-14);
  const cplx gs[] = {{1, 0}, {0, 1}, {-0.3, 2.0}, {1e8, 0}};
  for (cplx g : gs) {
    const vec3 n = normal_from_g(g);
    CHECK(std::fabs(n.norm() - 1.0) < 1e-9);
    // stereographic projection from the south pole recovers g
    if (std::abs(g) < 1e6)
      CHECK(std::abs(cplx(n.x, n.y) / (1.0 - n.z) - g) < 1e-8 * (1.0 + std::abs(g)));
  }
}

TEST_CASE("catenoid curvature equals the closed form -sech^4 at the waist scale") {
  // catenoid data g = z, dh = dz/z; at |z| = e^t the surface sits at height t
  // with K = -1 / cosh^4 t
  const WeierstrassBundle b = make_surface("catenoid");
  for (double t : {0.0, 0.5, -1.0, 2.0}) {
    const double K = gauss_curvature(b, at(b, std::exp(t)));
    const double c = std::cosh(t);
    CHECK(std::fabs(K + 1.0 / (c * c * c * c)) < 1e-9);
  }
}

TEST_CASE("curvature formula matches a finite-difference Gauss-map area ratio") {
  // |K| = (area ratio of the Gauss map) = 4 |dlog g|^2 / ((|g|+1/|g|)^2 lambda^2)
  // cross-checked against central differences of the unit normal
  const WeierstrassBundle b = make_surface("enneper");
  const cplx z0(0.8, 0.3);
  const double h = 1e-5;
  const vec3 n0 = normal_from_g(b.g_eval(at(b, z0)));
  const vec3 nx = (normal_from_g(b.g_eval(at(b, z0 + h))) -
                   normal_from_g(b.g_eval(at(b, z0 - h)))) * (1.0 / (2 * h));
  const vec3 ny = (normal_from_g(b.g_eval(at(b, z0 + cplx(0, h)))) -
                   normal_from_g(b.g_eval(at(b, z0 - cplx(0, h))))) * (1.0 / (2 * h));
  const double sphere_jac = nx.cross(ny).norm();  // area density of N in the chart
  const double lam = length_density(b, at(b, z0));
  const double K = gauss_curvature(b, at(b, z0));
  // |K| = (Gauss-map area density) / (surface area density lam^2)
  CHECK(std::fabs(std::fabs(K) - sphere_jac / (lam * lam)) < 1e-4 * std::fabs(K));
  (void)n0;
}

TEST_CASE("null-homotopic loops integrate to zero") {
  const WeierstrassBundle b = make_surface("catenoid");
  const cvec3 v = integrate_phi(b, circle_path(cplx(3, 1), 0.5), 1e-11);
  CHECK(v.real().norm() < 1e-9);
  CHECK(v.imag().norm() < 1e-9);
}

TEST_CASE("associate family preserves the metric and rotates the periods") {
  const WeierstrassBundle b = make_surface("catenoid");
  const WeierstrassBundle a = associate(b, 0.7);
  const SurfacePoint p = at(b, cplx(0.9, 0.4));
  CHECK(std::fabs(metric_density(a, p) - metric_density(b, p)) <
        1e-10 * metric_density(b, p));
  // the full complex integral picks up the phase e^{i theta}
  const ChartPath loop = circle_path(cplx(0, 0), 1.0);
  const cvec3 vb = integrate_phi(b, loop, 1e-11);
  const cvec3 va = integrate_phi(a, loop, 1e-11);
  const cplx rot = std::exp(cplx(0, 0.7));
  CHECK(std::abs(va.z - rot * vb.z) < 1e-9);
}

TEST_CASE("conjugate is the quarter-turn associate; applying it twice negates Phi") {
  const WeierstrassBundle b = make_surface("catenoid");
  const WeierstrassBundle cc = conjugate(conjugate(b));
  const SurfacePoint p = at(b, cplx(0.5, -0.2));
  const cvec3 v1 = eval_phi(b, p), v2 = eval_phi(cc, p);
  CHECK(std::abs(v2.z + v1.z) < 1e-12 * std::abs(v1.z));
}

TEST_CASE("Lopez-Ros deformation keeps the height differential") {
  const WeierstrassBundle b = make_surface("catenoid");
  const WeierstrassBundle lr = lopez_ros(b, 2.5);
  const SurfacePoint p = at(b, cplx(1.2, 0.1));
  CHECK(std::abs(lr.dh_eval(p) - b.dh_eval(p)) < 1e-14);
  CHECK(std::abs(lr.g_eval(p) - 2.5 * b.g_eval(p)) < 1e-12);
  // vertical flux is unchanged, horizontal flux is not (lambda != 1)
  const ChartPath loop = circle_path(cplx(0, 0), 1.0);
  CHECK(std::abs(integrate_phi(lr, loop, 1e-11).z -
                 integrate_phi(b, loop, 1e-11).z) < 1e-9);
}

TEST_CASE("dh residues match hand values and sum to zero") {
  const WeierstrassBundle cat = make_surface("catenoid");
  // dh = dz/z: residue 1 at the origin, -1 at infinity
  const cplx r0 = dh_residue(cat, *cat.find_puncture("bottom"));
  const cplx ri = dh_residue(cat, *cat.find_puncture("top"));
  CHECK(std::abs(r0 - cplx(1, 0)) < 1e-10);
  CHECK(std::abs(ri + cplx(1, 0)) < 1e-10);

  for (const char* name : {"n_noid", "immersed_flat_end", "mkx"}) {
    const WeierstrassBundle b = make_surface(name);
    cplx sum = 0;
    for (const auto& p : b.punctures) sum += dh_residue(b, p);
    CHECK(std::abs(sum) < 1e-9);
  }
}

TEST_CASE("growth rates of the solved family match the chart residues") {
  const WeierstrassBundle b = make_surface("mkx", {{"k", 2}, {"alpha", 1.0}});
  const FamilySolution s = solve_family(2, 1.0);
  CHECK(std::fabs(residue_and_growth(b, "bottom").growth - s.growth_bottom) < 1e-8);
  CHECK(std::fabs(residue_and_growth(b, "top").growth - s.growth_top) < 1e-8);
  CHECK(std::fabs(residue_and_growth(b, "middle").growth - s.growth_middle) < 1e-8);
}

TEST_CASE("asymptotic curve classification distinguishes the Enneper axes") {
  // along the real axis Enneper's second form is definite (principal curve);
  // along e^{i pi/4} directions it changes type
  const WeierstrassBundle b = make_surface("enneper");
  const SurfacePoint p = at(b, cplx(0.7, 0.0));
  const double along_real = second_form(b, p, cplx(1, 0));
  const double along_diag = second_form(b, p, std::exp(cplx(0, kPi / 4)));
  CHECK(std::fabs(along_real) > 1e-6);
  CHECK(std::fabs(along_diag) < 1e-10);  // asymptotic direction
}
