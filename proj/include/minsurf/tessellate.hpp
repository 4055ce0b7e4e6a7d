// tessellate.hpp -- triangle meshes from Weierstrass bundles: fundamental
// domain sampling + symmetry extension + welding; total curvature; end
// asymptotic fits; self-intersection reports; OBJ/PLY export.
#ifndef MINSURF_TESSELLATE_HPP
#define MINSURF_TESSELLATE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"
#include "period.hpp"
#include "riemann_domain.hpp"
#include "weierstrass.hpp"

namespace minsurf {

struct TriMesh {
  std::vector<vec3> vertices;
  std::vector<vec3> normals;
  std::vector<double> gauss_k;
  std::vector<std::array<int, 3>> triangles;
  std::vector<SurfacePoint> provenance;
  double trunc_eps = 1.0 / 64;
  double trunc_R = 64.0;
  int symmetry_copies = 1;

  double bbox_diag() const {
    vec3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
    for (const vec3& v : vertices) {
      lo.x = std::min(lo.x, v.x); lo.y = std::min(lo.y, v.y); lo.z = std::min(lo.z, v.z);
      hi.x = std::max(hi.x, v.x); hi.y = std::max(hi.y, v.y); hi.z = std::max(hi.z, v.z);
    }
    return (hi - lo).norm();
  }
};

struct MeshOptions {
  int resolution = 64;
  double eps = 1.0 / 64;   // chart truncation distance at each finite puncture
  double R = 64.0;         // chart truncation radius at infinity
  bool allow_multivalued = false;  // mesh non-period-free bundles on a cut domain
  double period_tol = 1e-7;
  double weld_tol_rel = 1e-7;
  double quad_tol = 1e-10;
};

// ---------------------------------------------------------------------------
// small mesh helpers

namespace detail {

struct mesh_builder {
  TriMesh m;
  int add_vertex(const WeierstrassBundle& b, const SurfacePoint& p, vec3 X) {
    m.vertices.push_back(X);
    m.provenance.push_back(p);
    cplx g;
    bool ok = true;
    try {
      g = b.g_eval(p);
    } catch (...) { ok = false; }
    if (ok && std::isfinite(std::abs(g))) {
      m.normals.push_back(normal_from_g(g));
    } else {
      m.normals.push_back(vec3{0, 0, 1});
    }
    double K = 0;
    try {
      K = gauss_curvature(b, p);
    } catch (const error&) {
      K = 0;  // saddle-type zero of g: curvature finite but formula 0/0; filled below
    }
    m.gauss_k.push_back(K);
    return int(m.vertices.size()) - 1;
  }
  void add_quad(int a, int b, int c, int d) {
    m.triangles.push_back({a, b, c});
    m.triangles.push_back({a, c, d});
  }
};

// Quantized-position welding; returns the welded mesh.
inline TriMesh weld(const TriMesh& in, double tol) {
  TriMesh out;
  out.trunc_eps = in.trunc_eps;
  out.trunc_R = in.trunc_R;
  out.symmetry_copies = in.symmetry_copies;
  std::unordered_map<long long, std::vector<int>> grid;  // cell -> out-vertex ids
  auto key = [&](long long ix, long long iy, long long iz) {
    return (ix * 73856093LL) ^ (iy * 19349663LL) ^ (iz * 83492791LL);
  };
  std::vector<int> remap(in.vertices.size());
  const double cell = std::max(tol, 1e-300);
  for (size_t i = 0; i < in.vertices.size(); ++i) {
    const vec3& v = in.vertices[i];
    const long long ix = (long long)std::floor(v.x / cell);
    const long long iy = (long long)std::floor(v.y / cell);
    const long long iz = (long long)std::floor(v.z / cell);
    int found = -1;
    for (long long dx = -1; dx <= 1 && found < 0; ++dx)
      for (long long dy = -1; dy <= 1 && found < 0; ++dy)
        for (long long dz = -1; dz <= 1 && found < 0; ++dz) {
          auto it = grid.find(key(ix + dx, iy + dy, iz + dz));
          if (it == grid.end()) continue;
          for (int id : it->second)
            if ((out.vertices[id] - v).norm_inf() <= tol) { found = id; break; }
        }
    if (found < 0) {
      found = int(out.vertices.size());
      out.vertices.push_back(v);
      out.normals.push_back(in.normals[i]);
      out.gauss_k.push_back(in.gauss_k[i]);
      out.provenance.push_back(in.provenance[i]);
      grid[key(ix, iy, iz)].push_back(found);
    }
    remap[i] = found;
  }
  for (const auto& t : in.triangles) {
    std::array<int, 3> r{remap[t[0]], remap[t[1]], remap[t[2]]};
    if (r[0] == r[1] || r[1] == r[2] || r[0] == r[2]) continue;  // collapsed
    out.triangles.push_back(r);
  }
  return out;
}

// Integration-graph edge: endpoint vertex ids plus optional chart waypoints
// (with lifts) for edges whose straight z-chord would stray from the domain.
struct tree_edge {
  int a = 0, b = 0;
  std::vector<SurfacePoint> via;
};

// Integrate Phi along one chart edge with known lifts at every sample.
inline vec3 edge_displacement(const WeierstrassBundle& b, const SurfacePoint& pa,
                              const SurfacePoint& pb,
                              const std::vector<SurfacePoint>& via, double quad_tol) {
  ChartPath path;
  path.samples.push_back(pa.z);
  path.lifts.push_back(pa.u);
  for (const SurfacePoint& w : via) {
    path.samples.push_back(w.z);
    path.lifts.push_back(w.u);
  }
  path.samples.push_back(pb.z);
  path.lifts.push_back(pb.u);
  path.start = pa;
  return integrate_immersion(b, path, quad_tol);
}

inline double seg_point_dist(cplx a, cplx b, cplx p) {
  const cplx d = b - a;
  const double L2 = std::norm(d);
  if (L2 == 0.0) return std::abs(p - a);
  double t = ((p - a) * std::conj(d)).real() / L2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(a + t * d - p);
}

// Spanning-tree integration of X over an edge graph.
inline std::vector<vec3> integrate_tree(const WeierstrassBundle& b,
                                        const std::vector<SurfacePoint>& pts,
                                        const std::vector<tree_edge>& edges,
                                        int root, vec3 X_root, double quad_tol) {
  std::vector<std::vector<std::pair<int, int>>> adj(pts.size());  // (nbr, edge)
  for (int e = 0; e < (int)edges.size(); ++e) {
    adj[edges[e].a].push_back({edges[e].b, e});
    adj[edges[e].b].push_back({edges[e].a, e});
  }
  std::vector<vec3> X(pts.size());
  std::vector<char> seen(pts.size(), 0);
  std::vector<int> queue{root};  // breadth-first: shallow trees accumulate less error
  X[root] = X_root;
  seen[root] = 1;
  size_t done = 1;
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    const int v = queue[qi];
    for (auto [w, e] : adj[v]) {
      if (seen[w]) continue;
      seen[w] = 1;
      ++done;
      if (edges[e].a == v) {
        X[w] = X[v] + edge_displacement(b, pts[v], pts[w], edges[e].via, quad_tol);
      } else {
        X[w] = X[v] - edge_displacement(b, pts[w], pts[v], edges[e].via, quad_tol);
      }
      queue.push_back(w);
    }
  }
  if (done != pts.size())
    throw error(errc::sheet_jump_detected, "integration graph is disconnected");
  return X;
}

// Geometrically graded 1-D ladder from `lo` to `hi` (both > 0): starts at lo,
// grows by factor `gr` until the step reaches `h`, then uniform; always ends
// exactly at hi.
inline std::vector<double> graded_line(double lo, double hi, double h, double gr = 1.5) {
  std::vector<double> v{lo};
  double cur = lo;
  while (cur < hi) {
    const double step = std::min(h, cur * (gr - 1.0));
    cur += std::max(step, 1e-14);
    if (cur >= hi * (1.0 - 1e-12)) { v.push_back(hi); break; }
    v.push_back(cur);
  }
  return v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// period pre-check

inline void check_period_free(const WeierstrassBundle& b, double period_tol,
                              double quad_tol = 1e-9) {
  for (const Cycle& c : b.basis) {
    const vec3 p = cycle_period(b, c, quad_tol);
    if (p.norm_inf() > period_tol)
      throw error(errc::nonzero_period,
                  "cycle period " + std::to_string(p.norm_inf()) + " exceeds tolerance on " +
                      b.name);
  }
}

// ---------------------------------------------------------------------------
// planar annular mesher (punctures at 0 / infinity only)

namespace detail {

inline TriMesh tessellate_annulus(const WeierstrassBundle& b, const MeshOptions& opt,
                                  bool cut_domain) {
  bool punct_at_zero = false;
  for (const auto& p : b.punctures)
    if (!p.at_infinity && std::abs(p.chart_location) < 1e-12) punct_at_zero = true;
  const double r_in = punct_at_zero ? opt.eps : 1e-3;
  const double r_out = opt.R;
  int n_r = std::max(8, int(std::ceil(opt.resolution * std::log(r_out / r_in) /
                                      (2.0 * kPi))));
  n_r += n_r % 2;  // even ring count: a symmetric annulus gets a ring at sqrt(r_in r_out)
  const int n_t = std::max(8, opt.resolution);
  const int turns = cut_domain ? 2 : 1;
  const int cols = cut_domain ? turns * n_t + 1 : n_t;

  mesh_builder mb;
  mb.m.trunc_eps = r_in;
  mb.m.trunc_R = r_out;
  std::vector<SurfacePoint> pts;
  auto vid = [&](int i, int j) { return i * cols + (cut_domain ? j : j % n_t); };
  for (int i = 0; i <= n_r; ++i) {
    const double r = r_in * std::pow(r_out / r_in, double(i) / n_r);
    for (int j = 0; j < cols; ++j) {
      const double t = 2.0 * kPi * turns * j / (cols - (cut_domain ? 1 : 0));
      pts.push_back(SurfacePoint{r * std::exp(cplx(0, t)), cplx(0, 0), std::nullopt});
    }
  }
  // integration graph: ring edges + radial edges (chords stay off 0)
  std::vector<tree_edge> edges;
  for (int i = 0; i <= n_r; ++i)
    for (int j = 0; j + 1 < cols + (cut_domain ? 0 : 1); ++j) {
      if (!cut_domain && j + 1 == cols) break;
      const int a = vid(i, j), c = vid(i, (j + 1) % cols);
      if (a != c) edges.push_back({a, c, {}});
    }
  for (int i = 0; i + 1 <= n_r; ++i)
    for (int j = 0; j < cols; ++j) edges.push_back({vid(i, j), vid(i + 1, j), {}});
  std::vector<vec3> X = integrate_tree(b, pts, edges, 0, vec3{0, 0, 0}, opt.quad_tol);
  for (size_t i = 0; i < pts.size(); ++i) mb.add_vertex(b, pts[i], X[i]);
  const int jmax = cut_domain ? cols - 1 : n_t;
  for (int i = 0; i < n_r; ++i)
    for (int j = 0; j < jmax; ++j) {
      const int a = vid(i, j), bb = vid(i, (j + 1) % cols);
      const int c = vid(i + 1, (j + 1) % cols), d = vid(i + 1, j);
      if (cut_domain && j + 1 >= cols) continue;
      mb.add_quad(a, bb, c, d);
    }
  mb.m.symmetry_copies = 1;
  return mb.m;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// mkx fundamental-domain mesher
//
// Fundamental domain: the upper half z-plane with one continuous u-sheet,
// parameterized by the strip coordinate lambda = log((z - x)/(z + 1/x)),
// which maps it onto {0 <= Im lambda <= pi}. The bottom/top catenoid ends sit
// at Re lambda = -/+ infinity (uniform lambda spacing = geometric chart
// spacing), the middle end at lambda = 0 on the lower edge, the saddle at
// 2 log x + i pi on the upper edge. The surface is the orbit of this piece
// under the 2k-element symmetry group, applied as isometries in R^3 followed
// by positional welding.

namespace detail {

inline cplx mkx_z_of_lambda(const FamilyCurve& c, cplx lam) {
  const cplx e = std::exp(lam);
  return (c.x + e / c.x) / (1.0 - e);
}

// Continuous u-sheet on the closed upper half plane: principal arguments of
// the three linear factors are individually continuous there.
inline cplx mkx_sheet_u(const FamilyCurve& c, cplx z) {
  // boundary points carry Im z = -0.0 after the strip map; force +0.0 so the
  // principal arguments take their upper-half-plane limits
  if (z.imag() == 0.0) z = cplx(z.real(), +0.0);
  const double argw = kPi + std::arg(z - c.x) + std::arg(z + 1.0 / c.x) - std::arg(z);
  const double logmag = std::log(std::abs(z - c.x)) + std::log(std::abs(z + 1.0 / c.x)) -
                        std::log(std::abs(z)) - std::log(c.x + 1.0 / c.x);
  // u = w^{-1/k}
  return std::exp(cplx(-logmag / c.k, -argw / c.k));
}

inline TriMesh tessellate_mkx(const WeierstrassBundle& b, const MeshOptions& opt) {
  const FamilyCurve& c = b.domain;
  const double x = c.x;
  const int k = c.k;
  const double span = x + 1.0 / x;
  const double L = std::log(span / opt.eps);      // strip half-length
  const double eps_l = span / opt.R;              // middle-end cutoff in lambda
  const double h = kPi / opt.resolution;

  // graded x-ladder from the middle end outwards, mirrored: [-L, -eps_l] u [eps_l, L]
  std::vector<double> right = graded_line(eps_l, L, h);
  std::vector<double> xs;
  for (auto it = right.rbegin(); it != right.rend(); ++it) xs.push_back(-*it);
  for (double v : right) xs.push_back(v);
  const int gap_i = int(right.size()) - 1;  // xs[gap_i] = -eps_l, xs[gap_i+1] = +eps_l
  // graded y-ladder: 0, then geometric from eps_l to pi
  std::vector<double> ys{0.0};
  for (double v : graded_line(eps_l, kPi, h)) ys.push_back(v);

  const int nx = int(xs.size()), ny = int(ys.size());
  std::vector<SurfacePoint> pts(size_t(nx) * ny);
  auto vid = [&](int i, int j) { return j * nx + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const cplx lam(xs[i], ys[j]);
      const cplx z = mkx_z_of_lambda(c, lam);
      pts[vid(i, j)] = SurfacePoint{z, mkx_sheet_u(c, z), std::nullopt};
    }

  // integration graph: all grid edges whose chart chord keeps clearance from
  // the saddle z = 0 (top-edge chords crossing it are excluded; connectivity
  // survives through the row below)
  const double clear0 = std::min({1e-3, opt.eps / 2, eps_l / 2});
  std::vector<tree_edge> edges;
  auto lam_waypoints = [&](cplx la, cplx lb) {
    // follow the lambda-segment: its z-image stays far from the punctures
    // even where the straight z-chord would cut through them
    std::vector<SurfacePoint> via;
    const int n_sub = 16;
    for (int s = 1; s < n_sub; ++s) {
      const cplx lam = la + (lb - la) * (double(s) / n_sub);
      const cplx z = mkx_z_of_lambda(c, lam);
      via.push_back(SurfacePoint{z, mkx_sheet_u(c, z), std::nullopt});
    }
    return via;
  };
  auto try_edge = [&](int a, int bb, cplx la, cplx lb) {
    const bool crosses = la.real() * lb.real() < 0.0;  // spans the middle-end gap
    if (!crosses && seg_point_dist(pts[a].z, pts[bb].z, cplx(0, 0)) < clear0) return;
    if (crosses && std::min(la.imag(), lb.imag()) <= 0.0) return;  // through z=inf
    edges.push_back({a, bb, crosses ? lam_waypoints(la, lb) : std::vector<SurfacePoint>{}});
  };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i)
      try_edge(vid(i, j), vid(i + 1, j), cplx(xs[i], ys[j]), cplx(xs[i + 1], ys[j]));
  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i < nx; ++i)
      try_edge(vid(i, j), vid(i, j + 1), cplx(xs[i], ys[j]), cplx(xs[i], ys[j + 1]));

  // root: interior vertex nearest the saddle lambda_s = 2 log x + i pi,
  // anchored by X(p0) = 0 via a ray integral z = z_root t^k (the substitution
  // absorbs the z^{-(k-1)/k} singularity of phi at the saddle)
  int root = vid(0, ny - 1);
  {
    const cplx lam_s(2.0 * std::log(x), kPi);
    double dbest = 1e300;
    for (int i = 0; i < nx; ++i) {
      const double d = std::abs(cplx(xs[i], ys[ny - 2]) - lam_s);
      if (d < dbest) { dbest = d; root = vid(i, ny - 2); }
    }
  }
  const cplx z_root = pts[root].z;
  quad_options ropt;
  ropt.abs_tol = opt.quad_tol;
  auto ray_f = [&](double t) -> cvec3 {
    const cplx z = z_root * std::pow(t, k);
    const cplx dz = double(k) * z_root * std::pow(t, k - 1);
    const SurfacePoint p{z, mkx_sheet_u(c, z), std::nullopt};
    return eval_phi(b, p) * dz;
  };
  const vec3 X_root = integrate_adaptive<cvec3>(ray_f, 1e-9, 1.0, ropt).real();
  std::vector<vec3> X = integrate_tree(b, pts, edges, root, X_root, opt.quad_tol);

  // column whose top cell straddles the saddle chart point z = 0
  const double sx = 2.0 * std::log(x);
  int saddle_i = -1;
  for (int i = 0; i + 1 < nx; ++i)
    if (xs[i] < sx && sx <= xs[i + 1]) { saddle_i = i; break; }

  // fundamental mesh
  mesh_builder mb;
  mb.m.trunc_eps = opt.eps;
  mb.m.trunc_R = opt.R;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) mb.add_vertex(b, pts[vid(i, j)], X[vid(i, j)]);
  for (int j = 0; j + 1 < ny; ++j)
    for (int i = 0; i + 1 < nx; ++i) {
      if (j == 0 && i == gap_i) continue;  // middle-end truncation notch
      if (j == ny - 2 && i == saddle_i) continue;  // split against the saddle below
      mb.add_quad(vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1));
    }
  // The saddle z = 0 sits on the top boundary row between two different
  // symmetry curves, so it must be an actual vertex: insert it with X = 0
  // (the integration anchor) and fan the straddling top cell onto it.
  if (saddle_i >= 0) {
    mb.m.vertices.push_back(vec3{0, 0, 0});
    mb.m.normals.push_back(vec3{0, 0, -1});
    double k_saddle = 0.0;
    try {
      const cplx zq(1e-6, 1e-6);
      k_saddle = gauss_curvature(b, SurfacePoint{zq, mkx_sheet_u(c, zq), std::nullopt});
    } catch (...) {}
    mb.m.gauss_k.push_back(k_saddle);
    mb.m.provenance.push_back(SurfacePoint{cplx(0, 0), cplx(0, 0), std::nullopt});
    const int S = int(mb.m.vertices.size()) - 1;
    const int a = vid(saddle_i, ny - 2), bq = vid(saddle_i + 1, ny - 2);
    const int cq = vid(saddle_i + 1, ny - 1), d = vid(saddle_i, ny - 1);
    mb.m.triangles.push_back({a, bq, cq});
    mb.m.triangles.push_back({a, cq, S});
    mb.m.triangles.push_back({a, S, d});
  }
  // fill curvature at near-saddle vertices where the 0/0 formula gave 0
  for (size_t i = 0; i < mb.m.gauss_k.size(); ++i) {
    if (mb.m.gauss_k[i] == 0.0 && !mb.m.provenance[i].is_puncture()) {
      const cplx z = mb.m.provenance[i].z + cplx(1e-7, 1e-7);
      try {
        mb.m.gauss_k[i] = gauss_curvature(b, SurfacePoint{z, mkx_sheet_u(c, z), std::nullopt});
      } catch (...) {}
    }
  }

  // symmetry orbit: rotations R(2 pi j / k) and their (x1,x3)-plane mirrors
  TriMesh big;
  big.trunc_eps = opt.eps;
  big.trunc_R = opt.R;
  big.symmetry_copies = 2 * k;
  const TriMesh& f = mb.m;
  for (int j = 0; j < k; ++j) {
    for (int mirror = 0; mirror < 2; ++mirror) {
      const double a = 2.0 * kPi * j / k;
      const double ca = std::cos(a), sa = std::sin(a);
      const int base = int(big.vertices.size());
      for (size_t v = 0; v < f.vertices.size(); ++v) {
        vec3 p = f.vertices[v], n = f.normals[v];
        vec3 pr{ca * p.x - sa * p.y, sa * p.x + ca * p.y, p.z};
        vec3 nr{ca * n.x - sa * n.y, sa * n.x + ca * n.y, n.z};
        if (mirror) { pr.y = -pr.y; nr.y = -nr.y; }
        big.vertices.push_back(pr);
        big.normals.push_back(nr);
        big.gauss_k.push_back(f.gauss_k[v]);
        big.provenance.push_back(f.provenance[v]);
      }
      for (const auto& t : f.triangles) {
        if (mirror)
          big.triangles.push_back({base + t[0], base + t[2], base + t[1]});
        else
          big.triangles.push_back({base + t[0], base + t[1], base + t[2]});
      }
    }
  }
  return weld(big, opt.weld_tol_rel * big.bbox_diag());
}

}  // namespace detail

inline TriMesh tessellate(const WeierstrassBundle& b, const MeshOptions& opt = {}) {
  if (!opt.allow_multivalued) {
    check_period_free(b, opt.period_tol);
  }
  if (b.domain.kind == curve_kind::mkx) return detail::tessellate_mkx(b, opt);
  if (b.domain.kind == curve_kind::planar) {
    for (const auto& p : b.punctures)
      if (!p.at_infinity && std::abs(p.chart_location) > 1e-12)
        throw error(errc::unsupported_topology,
                    "annular mesher requires punctures at 0/infinity only");
    const bool cut = opt.allow_multivalued && !b.well_posed;
    return detail::tessellate_annulus(b, opt, cut);
  }
  throw error(errc::unsupported_topology,
              "tessellation implemented for planar and mkx domains");
}

// ---------------------------------------------------------------------------
// total curvature
//
// K dA equals minus the pullback of the round-sphere area form under g, so
// the total curvature is minus the chart integral of
//   sheets * 4 |dlog g|^2 / (|g| + 1/|g|)^2,
// which only needs |g| (the sheets of the family curves share |u|). Each
// singular chart point gets its own centered polar patch (the polar Jacobian
// cancels the worst local power), the remainder is covered by a masked
// global polar integral compactified with r = tan(s).

namespace detail {

inline double pullback_density(const WeierstrassBundle& b, cplx z) {
  SurfacePoint p{z, cplx(0, 0), std::nullopt};
  double ag;
  if (b.domain.kind == curve_kind::planar) {
    ag = std::abs(b.g_eval(p));
  } else {
    // |g| is sheet-independent; evaluate on any sheet candidate
    const std::vector<cplx> cand = b.domain.sheet_candidates(z);
    p.u = cand.front();
    ag = std::abs(b.g_eval(p));
  }
  const cplx dlg = b.dlogg_eval(p);
  if (!(ag > 0.0) || !std::isfinite(ag)) return 0.0;  // measure-zero pole/zero
  const double s = ag + 1.0 / ag;
  const double q = 2.0 * std::abs(dlg) / s;
  return double(b.domain.sheet_count()) * q * q;
}

// Chart points where the density has an integrable power singularity.
inline std::vector<cplx> density_singularities(const WeierstrassBundle& b) {
  std::vector<cplx> out;
  for (const cplx& v : b.domain.branch_values()) out.push_back(v);
  for (const auto& p : b.punctures)
    if (!p.at_infinity) out.push_back(p.chart_location);
  // poles of g for the rational entries (centers improve convergence only)
  std::sort(out.begin(), out.end(), [](cplx a, cplx bb) {
    return a.real() != bb.real() ? a.real() < bb.real() : a.imag() < bb.imag();
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](cplx a, cplx bb) { return std::abs(a - bb) < 1e-12; }),
            out.end());
  return out;
}

}  // namespace detail

inline double total_curvature(const WeierstrassBundle& b, double abs_tol = 1e-4) {
  const std::vector<cplx> sing = detail::density_singularities(b);
  // patch radii: disjoint, modest
  std::vector<double> rad(sing.size(), 0.5);
  for (size_t i = 0; i < sing.size(); ++i)
    for (size_t j = 0; j < sing.size(); ++j)
      if (i != j) rad[i] = std::min(rad[i], 0.45 * std::abs(sing[i] - sing[j]));
  auto inside_patch = [&](cplx z) {
    for (size_t i = 0; i < sing.size(); ++i)
      if (std::abs(z - sing[i]) < rad[i]) return true;
    return false;
  };
  quad_options inner_opt, outer_opt;
  const double share = abs_tol / (2.0 * (sing.size() + 1));
  inner_opt.abs_tol = share / 8.0;
  outer_opt.abs_tol = share;

  double total = 0.0;
  // centered polar patches; the ring integral is weighted by r, so its
  // tolerance can relax like 1/r -- essential near ramification points where
  // the density magnitude diverges and an absolute tolerance would sit below
  // the rounding floor of the integrand scale
  // The radial profile behaves like r^{2/k - 1} at a ramification point of
  // local order k; r = r1 s^4 keeps the substituted integrand bounded for
  // orders up to 8.  Radii below ~1e-9 are cut off: closer to the center the
  // chart difference z - c0 cancels catastrophically, and the dropped tail
  // integrates to O(r_min^{2/k}), far below the tolerance.
  for (size_t i = 0; i < sing.size(); ++i) {
    const cplx c0 = sing[i];
    const double r1 = rad[i];
    auto fs_patch = [&](double s) {
      const double s2 = s * s;
      const double r = r1 * s2 * s2;
      if (r <= 0.0) return 0.0;
      auto ft = [&](double t) {
        return detail::pullback_density(b, c0 + r * std::exp(cplx(0, t)));
      };
      quad_options ring = inner_opt;
      // relax like 1/r (the ring is weighted by r), but never demand more
      // relative accuracy than the chart-difference rounding noise allows
      ring.abs_tol = std::max(inner_opt.abs_tol / r,
                              3e-6 * 2.0 * kPi * ft(0.1234567));
      return 4.0 * r1 * s2 * s * r *
             integrate_adaptive<double>(ft, 0.0, 2.0 * kPi, ring);
    };
    const double s_min = std::pow(1e-9 / r1, 0.25);
    total += integrate_adaptive<double>(fs_patch, s_min, 1.0, outer_opt);
  }
  // masked global polar integral, compactified radially
  auto fs = [&](double s) {
    const double r = std::tan(s);
    const double jac = 1.0 + r * r;
    auto ft = [&](double t) {
      const cplx z = r * std::exp(cplx(0, t));
      if (inside_patch(z)) return 0.0;
      return detail::pullback_density(b, z);
    };
    return r * jac * integrate_adaptive<double>(ft, 0.0, 2.0 * kPi, inner_opt);
  };
  total += integrate_adaptive<double>(fs, 1e-8, kPi / 2 - 1e-8, outer_opt);
  return -total;
}

// Mesh-based total curvature (diagnostic; converges to the chart integral
// over the truncated domain as the mesh refines).
inline double total_curvature(const TriMesh& m) {
  double tc = 0.0;
  for (const auto& t : m.triangles) {
    const vec3 e1 = m.vertices[t[1]] - m.vertices[t[0]];
    const vec3 e2 = m.vertices[t[2]] - m.vertices[t[0]];
    const double area = 0.5 * e1.cross(e2).norm();
    const double kavg = (m.gauss_k[t[0]] + m.gauss_k[t[1]] + m.gauss_k[t[2]]) / 3.0;
    tc += kavg * area;
  }
  return tc;
}

// ---------------------------------------------------------------------------
// end asymptotics: x3 = alpha log rho + beta + (gamma1 x1 + gamma2 x2)/rho^2

struct EndFit {
  double alpha = 0, beta = 0, gamma1 = 0, gamma2 = 0;
  double rms_residual = 0;
  int n_samples = 0;
};

inline EndFit end_fit(const WeierstrassBundle& b, const TriMesh& m,
                      const std::string& puncture_id) {
  const PunctureInfo* p = b.find_puncture(puncture_id);
  if (!p) throw error(errc::unknown_entry, "end_fit: no puncture " + puncture_id);
  std::vector<int> members;
  for (size_t i = 0; i < m.vertices.size(); ++i) {
    const cplx z = m.provenance[i].z;
    const double d = p->at_infinity ? 1.0 / std::max(1e-12, std::abs(z))
                                    : std::abs(z - p->chart_location);
    if (d < 0.25) members.push_back(int(i));
  }
  // estimate the end axis as the horizontal centroid of the end band (the
  // band is angularly uniform, so the centroid sits on the limit axis), then
  // rank by horizontal radius about that axis
  double cx = 0, cy = 0;
  for (int id : members) { cx += m.vertices[id].x; cy += m.vertices[id].y; }
  if (!members.empty()) { cx /= double(members.size()); cy /= double(members.size()); }
  // outermost 20% by horizontal radius
  std::sort(members.begin(), members.end(), [&](int a, int bb) {
    const vec3 va = m.vertices[a] - vec3{cx, cy, 0}, vb = m.vertices[bb] - vec3{cx, cy, 0};
    return va.x * va.x + va.y * va.y > vb.x * vb.x + vb.y * vb.y;
  });
  const size_t keep = std::max<size_t>(members.size() / 5, 16);
  if (members.size() < 32 || keep > members.size())
    throw error(errc::insufficient_end_samples,
                "end_fit: only " + std::to_string(members.size()) + " end vertices");
  members.resize(keep);

  // normal equations for [log rho, 1, x1/rho^2, x2/rho^2] -> x3
  double A[4][4] = {}, rhs[4] = {};
  for (int id : members) {
    const vec3 v = m.vertices[id] - vec3{cx, cy, 0};
    const double rho2 = v.x * v.x + v.y * v.y;
    const double row[4] = {0.5 * std::log(rho2), 1.0, v.x / rho2, v.y / rho2};
    for (int a = 0; a < 4; ++a) {
      rhs[a] += row[a] * v.z;
      for (int c = 0; c < 4; ++c) A[a][c] += row[a] * row[c];
    }
  }
  // Gaussian elimination with partial pivoting (4x4)
  int piv[4] = {0, 1, 2, 3};
  for (int col = 0; col < 4; ++col) {
    int best = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::fabs(A[r][col]) > std::fabs(A[best][col])) best = r;
    std::swap(A[col], A[best]);
    std::swap(rhs[col], rhs[best]);
    std::swap(piv[col], piv[best]);
    for (int r = col + 1; r < 4; ++r) {
      const double f = A[r][col] / A[col][col];
      for (int c2 = col; c2 < 4; ++c2) A[r][c2] -= f * A[col][c2];
      rhs[r] -= f * rhs[col];
    }
  }
  double sol[4];
  for (int r = 3; r >= 0; --r) {
    double s = rhs[r];
    for (int c2 = r + 1; c2 < 4; ++c2) s -= A[r][c2] * sol[c2];
    sol[r] = s / A[r][r];
  }
  EndFit fit;
  fit.alpha = sol[0];
  fit.beta = sol[1];
  fit.gamma1 = sol[2];
  fit.gamma2 = sol[3];
  fit.n_samples = int(keep);
  double ss = 0;
  for (int id : members) {
    const vec3 v = m.vertices[id] - vec3{cx, cy, 0};
    const double rho2 = v.x * v.x + v.y * v.y;
    const double pred = fit.alpha * 0.5 * std::log(rho2) + fit.beta +
                        (fit.gamma1 * v.x + fit.gamma2 * v.y) / rho2;
    ss += (v.z - pred) * (v.z - pred);
  }
  fit.rms_residual = std::sqrt(ss / keep);
  return fit;
}

// ---------------------------------------------------------------------------
// self-intersection report

struct IntersectionReport {
  long tested_pairs = 0;
  long count = 0;
  std::vector<vec3> samples;  // one representative point per hit (capped)
};

namespace detail {

// Moller-style triangle-triangle overlap test.
inline bool tri_tri_overlap(const vec3* T1, const vec3* T2, double eps) {
  auto plane_side = [&](const vec3* T, const vec3* P, double* d) {
    const vec3 n = (T[1] - T[0]).cross(T[2] - T[0]);
    bool pos = false, neg = false;
    for (int i = 0; i < 3; ++i) {
      d[i] = n.dot(P[i] - T[0]);
      if (d[i] > eps) pos = true;
      else if (d[i] < -eps) neg = true;
      else d[i] = 0.0;
    }
    return pos && neg ? 0 : (pos ? 1 : (neg ? -1 : 2));  // 2: coplanar-ish
  };
  double d1[3], d2[3];
  const int s1 = plane_side(T1, T2, d2);
  if (s1 == 1 || s1 == -1) return false;
  const int s2 = plane_side(T2, T1, d1);
  if (s2 == 1 || s2 == -1) return false;
  if (s1 == 2 || s2 == 2) return false;  // coplanar: ignore (welded seams)
  // interval test on the intersection line L = n1 x n2
  const vec3 n1 = (T1[1] - T1[0]).cross(T1[2] - T1[0]);
  const vec3 n2 = (T2[1] - T2[0]).cross(T2[2] - T2[0]);
  const vec3 L = n1.cross(n2);
  auto interval = [&](const vec3* T, const double* d, double* lo, double* hi) {
    double pr[3];
    for (int i = 0; i < 3; ++i) pr[i] = L.dot(T[i]);
    // edges crossing the plane
    double ts[2];
    int nts = 0;
    for (int i = 0; i < 3 && nts < 2; ++i) {
      const int j = (i + 1) % 3;
      if (d[i] * d[j] < 0.0) {
        ts[nts++] = pr[i] + (pr[j] - pr[i]) * (d[i] / (d[i] - d[j]));
      } else if (d[i] == 0.0 && nts < 2) {
        ts[nts++] = pr[i];
      }
    }
    if (nts < 2) { ts[1] = ts[0] = (nts ? ts[0] : 0.0); }
    *lo = std::min(ts[0], ts[1]);
    *hi = std::max(ts[0], ts[1]);
    return true;
  };
  double a0, a1, b0, b1;
  interval(T1, d1, &a0, &a1);
  interval(T2, d2, &b0, &b1);
  return std::max(a0, b0) < std::min(a1, b1) - eps;
}

}  // namespace detail

inline IntersectionReport self_intersection(const TriMesh& m, int max_samples = 16) {
  IntersectionReport rep;
  const size_t nt = m.triangles.size();
  if (nt == 0) return rep;
  // broad phase: uniform hash on triangle AABBs
  double cell = 0.0;
  std::vector<std::array<vec3, 2>> boxes(nt);
  for (size_t t = 0; t < nt; ++t) {
    vec3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
    for (int c = 0; c < 3; ++c) {
      const vec3& v = m.vertices[m.triangles[t][c]];
      lo.x = std::min(lo.x, v.x); lo.y = std::min(lo.y, v.y); lo.z = std::min(lo.z, v.z);
      hi.x = std::max(hi.x, v.x); hi.y = std::max(hi.y, v.y); hi.z = std::max(hi.z, v.z);
    }
    boxes[t] = {lo, hi};
    cell += (hi - lo).norm_inf();
  }
  cell = std::max(cell / nt * 2.0, 1e-12);
  std::unordered_map<long long, std::vector<int>> grid;
  auto key = [&](long long ix, long long iy, long long iz) {
    return (ix * 73856093LL) ^ (iy * 19349663LL) ^ (iz * 83492791LL);
  };
  for (size_t t = 0; t < nt; ++t) {
    const auto& bx = boxes[t];
    for (long long ix = (long long)std::floor(bx[0].x / cell);
         ix <= (long long)std::floor(bx[1].x / cell); ++ix)
      for (long long iy = (long long)std::floor(bx[0].y / cell);
           iy <= (long long)std::floor(bx[1].y / cell); ++iy)
        for (long long iz = (long long)std::floor(bx[0].z / cell);
             iz <= (long long)std::floor(bx[1].z / cell); ++iz)
          grid[key(ix, iy, iz)].push_back(int(t));
  }
  const double eps = 1e-10 * cell;
  std::vector<std::pair<int, int>> done;  // dedup via sort at the end is heavy; use set-ish
  std::unordered_map<long long, char> seen_pair;
  for (auto& [kk, bucket] : grid) {
    for (size_t a = 0; a < bucket.size(); ++a)
      for (size_t bb = a + 1; bb < bucket.size(); ++bb) {
        int t1 = bucket[a], t2 = bucket[bb];
        if (t1 > t2) std::swap(t1, t2);
        const long long pk = (long long)t1 * (long long)nt + t2;
        if (seen_pair.count(pk)) continue;
        seen_pair[pk] = 1;
        // AABB reject
        bool sep = false;
        for (int c = 0; c < 3 && !sep; ++c) {
          const double lo1 = (&boxes[t1][0].x)[c], hi1 = (&boxes[t1][1].x)[c];
          const double lo2 = (&boxes[t2][0].x)[c], hi2 = (&boxes[t2][1].x)[c];
          if (hi1 < lo2 - eps || hi2 < lo1 - eps) sep = true;
        }
        if (sep) continue;
        // shared-vertex exclusion
        bool shared = false;
        for (int i = 0; i < 3 && !shared; ++i)
          for (int j = 0; j < 3; ++j)
            if (m.triangles[t1][i] == m.triangles[t2][j]) { shared = true; break; }
        if (shared) continue;
        ++rep.tested_pairs;
        vec3 A[3], B[3];
        for (int i = 0; i < 3; ++i) {
          A[i] = m.vertices[m.triangles[t1][i]];
          B[i] = m.vertices[m.triangles[t2][i]];
        }
        if (detail::tri_tri_overlap(A, B, eps)) {
          ++rep.count;
          if ((int)rep.samples.size() < max_samples)
            rep.samples.push_back((A[0] + A[1] + A[2]) / 3.0);
        }
      }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// export

inline void export_mesh(const TriMesh& m, const std::string& format,
                        const std::string& path) {
  std::ofstream out(path);
  if (!out) throw error(errc::io_error, "cannot open " + path);
  char buf[256];
  if (format == "obj") {
    for (size_t i = 0; i < m.vertices.size(); ++i) {
      std::snprintf(buf, sizeof buf, "v %.9g %.9g %.9g\n", m.vertices[i].x,
                    m.vertices[i].y, m.vertices[i].z);
      out << buf;
    }
    for (size_t i = 0; i < m.normals.size(); ++i) {
      std::snprintf(buf, sizeof buf, "vn %.9g %.9g %.9g\n", m.normals[i].x,
                    m.normals[i].y, m.normals[i].z);
      out << buf;
    }
    for (const auto& t : m.triangles) {
      std::snprintf(buf, sizeof buf, "f %d//%d %d//%d %d//%d\n", t[0] + 1, t[0] + 1,
                    t[1] + 1, t[1] + 1, t[2] + 1, t[2] + 1);
      out << buf;
    }
  } else if (format == "ply") {
    out << "ply\nformat ascii 1.0\n";
    out << "element vertex " << m.vertices.size() << "\n";
    out << "property float64 x\nproperty float64 y\nproperty float64 z\n";
    out << "property float64 nx\nproperty float64 ny\nproperty float64 nz\n";
    out << "property float64 gauss_k\n";
    out << "element face " << m.triangles.size() << "\n";
    out << "property list uint8 int32 vertex_indices\nend_header\n";
    for (size_t i = 0; i < m.vertices.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.9g %.9g %.9g %.9g %.9g %.9g %.9g\n",
                    m.vertices[i].x, m.vertices[i].y, m.vertices[i].z, m.normals[i].x,
                    m.normals[i].y, m.normals[i].z, m.gauss_k[i]);
      out << buf;
    }
    for (const auto& t : m.triangles)
      out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
  } else {
    throw error(errc::bad_config, "export format must be obj or ply");
  }
  if (!out.good()) throw error(errc::io_error, "write failure on " + path);
}

// Euler characteristic of the mesh (V - E + F), E counted from unique edges.
inline int euler_characteristic(const TriMesh& m) {
  std::unordered_map<long long, char> edges;
  for (const auto& t : m.triangles)
    for (int i = 0; i < 3; ++i) {
      long long a = t[i], bb = t[(i + 1) % 3];
      if (a > bb) std::swap(a, bb);
      edges[a * 1000000007LL + bb] = 1;
    }
  return int(m.vertices.size()) - int(edges.size()) + int(m.triangles.size());
}

}  // namespace minsurf

#endif  // MINSURF_TESSELLATE_HPP
