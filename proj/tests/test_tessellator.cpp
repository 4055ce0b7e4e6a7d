// Tessellator and diagnostics: mesh topology, export round trips, total
// curvature convergence, self-intersection reports, end asymptotic fits.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "minsurf/catalog.hpp"
#include "minsurf/tessellate.hpp"

using namespace minsurf;

TEST_CASE("catenoid mesh: annulus topology and clean geometry") {
  MeshOptions opt;
  opt.resolution = 48;
  const TriMesh m = tessellate(make_surface("catenoid"), opt);
  CHECK(euler_characteristic(m) == 0);
  CHECK(m.vertices.size() > 500);
  // rotationally symmetric about its own axis (the immersion carries a
  // base-point translation, so recenter first): isotropic second moments
  double cx = 0, cy = 0;
  for (const vec3& v : m.vertices) { cx += v.x; cy += v.y; }
  cx /= double(m.vertices.size());
  cy /= double(m.vertices.size());
  double mxx = 0, myy = 0, mxy = 0;
  for (const vec3& v : m.vertices) {
    mxx += (v.x - cx) * (v.x - cx);
    myy += (v.y - cy) * (v.y - cy);
    mxy += (v.x - cx) * (v.y - cy);
  }
  CHECK(std::fabs(mxx - myy) < 1e-6 * (mxx + myy));
  CHECK(std::fabs(mxy) < 1e-6 * (mxx + myy));
  CHECK(self_intersection(m).count == 0);
}

TEST_CASE("mesh total curvature approaches the chart integral under refinement") {
  const WeierstrassBundle b = make_surface("catenoid");
  MeshOptions lo, hi;
  lo.resolution = 16;
  hi.resolution = 64;
  const double exact = total_curvature(b);
  const double err_lo = std::fabs(total_curvature(tessellate(b, lo)) - exact);
  const double err_hi = std::fabs(total_curvature(tessellate(b, hi)) - exact);
  CHECK(err_hi < err_lo);
  CHECK(err_hi < 0.05 * std::fabs(exact));
}

TEST_CASE("chart total curvature hits the exact values") {
  CHECK(std::fabs(total_curvature(make_surface("catenoid")) + 4 * kPi) < 0.005 * 4 * kPi);
  CHECK(std::fabs(total_curvature(make_surface("enneper")) + 4 * kPi) < 0.005 * 4 * kPi);
  CHECK(std::fabs(total_curvature(make_surface("chen_gackstatter")) + 8 * kPi) <
        0.01 * 8 * kPi);
  CHECK(std::fabs(total_curvature(make_surface("n_noid", {{"n", 3}})) + 8 * kPi) <
        0.01 * 8 * kPi);
}

TEST_CASE("mkx mesh: genus and boundary count via the Euler characteristic") {
  for (int k : {2, 3}) {
    MeshOptions opt;
    opt.resolution = 32;
    opt.eps = 1.0 / 16;
    const TriMesh m = tessellate(make_surface("mkx", {{"k", k}, {"alpha", 1.0}}), opt);
    // genus k-1 with 3 end boundaries: chi = 2 - 2(k-1) - 3 = 1 - 2k
    CHECK(euler_characteristic(m) == 1 - 2 * k);
    CHECK(m.symmetry_copies == 2 * k);
  }
}

TEST_CASE("unsupported domains are refused") {
  CHECK_THROWS_AS(tessellate(make_surface("chen_gackstatter")), error);
  // off-origin finite punctures need a different chart decomposition
  CHECK_THROWS_AS(tessellate(make_surface("n_noid")), error);
}

TEST_CASE("non-period-free data needs the multivalued opt-in") {
  const WeierstrassBundle b = make_surface("assoc_catenoid", {{"theta", kPi / 4}});
  CHECK_THROWS_AS(tessellate(b), error);
  try {
    tessellate(b);
  } catch (const error& e) {
    CHECK(e.code() == errc::nonzero_period);
    CHECK(e.expected_failure());
  }
  MeshOptions opt;
  opt.resolution = 32;
  opt.allow_multivalued = true;
  const TriMesh m = tessellate(b, opt);
  CHECK(m.vertices.size() > 100);
  // the associate of the catenoid at pi/4 passes through itself
  CHECK(self_intersection(m).count > 0);
}

TEST_CASE("OBJ and PLY exports round-trip the element counts") {
  MeshOptions opt;
  opt.resolution = 16;
  const TriMesh m = tessellate(make_surface("catenoid"), opt);
  const std::string obj = "/tmp/minsurf_test_mesh.obj";
  const std::string ply = "/tmp/minsurf_test_mesh.ply";
  export_mesh(m, "obj", obj);
  export_mesh(m, "ply", ply);

  size_t v = 0, f = 0, vn = 0;
  std::ifstream in(obj);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("v ", 0) == 0) ++v;
    if (line.rfind("vn ", 0) == 0) ++vn;
    if (line.rfind("f ", 0) == 0) ++f;
  }
  CHECK(v == m.vertices.size());
  CHECK(vn == m.normals.size());
  CHECK(f == m.triangles.size());

  std::ifstream inp(ply);
  size_t pv = 0, pf = 0;
  while (std::getline(inp, line)) {
    std::istringstream ss(line);
    std::string a, b2;
    ss >> a >> b2;
    if (a == "element" && b2 == "vertex") ss >> pv;
    if (a == "element" && b2 == "face") ss >> pf;
  }
  CHECK(pv == m.vertices.size());
  CHECK(pf == m.triangles.size());
  std::remove(obj.c_str());
  std::remove(ply.c_str());
}

TEST_CASE("export to an unwritable path raises IoError") {
  MeshOptions opt;
  opt.resolution = 8;
  const TriMesh m = tessellate(make_surface("enneper"), opt);
  CHECK_THROWS_AS(export_mesh(m, "obj", "/nonexistent_dir/x.obj"), error);
}

TEST_CASE("end fit recovers the catenoid growth rates within 1%") {
  MeshOptions opt;
  opt.resolution = 48;
  opt.eps = std::ldexp(1.0, -18);
  opt.R = std::ldexp(1.0, 18);
  const WeierstrassBundle b = make_surface("catenoid");
  const TriMesh m = tessellate(b, opt);
  for (const char* id : {"bottom", "top"}) {
    const EndFit fit = end_fit(b, m, id);
    const double growth = -dh_residue(b, *b.find_puncture(id)).real();
    CHECK(std::fabs(fit.alpha - growth) < 0.01 * std::fabs(growth));
  }
}

TEST_CASE("mirror symmetry of the mkx mesh about the horizontal plane through the waist") {
  // the reflection symmetry of the family maps the mesh into itself up to a
  // vertical flip; verify via the z-moment of the vertex cloud
  MeshOptions opt;
  opt.resolution = 24;
  opt.eps = 1.0 / 16;
  const TriMesh m = tessellate(make_surface("mkx", {{"k", 2}, {"alpha", kPi / 4}}), opt);
  // at alpha = pi/4 the two catenoid ends have opposite growth, so the vertex
  // histogram of x-y radii is symmetric under z -> -z about the median plane
  double zmin = 1e300, zmax = -1e300;
  for (const vec3& v : m.vertices) { zmin = std::min(zmin, v.z); zmax = std::max(zmax, v.z); }
  const double mid = 0.5 * (zmin + zmax);
  double skew = 0;
  for (const vec3& v : m.vertices) skew += (v.z - mid);
  CHECK(std::fabs(skew / m.vertices.size()) < 0.02 * (zmax - zmin));
}
