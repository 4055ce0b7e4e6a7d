// catalog.hpp -- ready-to-use Weierstrass bundles for every surface with
// explicit data, including the deliberately period-broken negative examples
// and the non-embedded flat-end example used by the diagnostics tests.
#ifndef MINSURF_CATALOG_HPP
#define MINSURF_CATALOG_HPP

#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"
#include "period.hpp"
#include "riemann_domain.hpp"
#include "weierstrass.hpp"

namespace minsurf {

struct ExpectedRecord {
  double total_curvature = 0;  // always -4 pi * degree
  int genus = 0;
  int ends = 0;
  int degree = 0;      // degree of the extended Gauss map
  bool embedded = false;
  int index = -1;      // stability index of the Gauss map; -1 when unknown
};

struct CatalogEntry {
  std::string name;
  std::vector<std::string> param_names;
  std::map<std::string, double> default_params;
  ExpectedRecord expected;  // for the default parameters
  bool well_posed = true;   // false: exists to fail the period test
};

namespace detail {

// Chart circle with u-lifts tracked by continuous argument of the sheet rhs;
// valid whenever u returns to itself after `turns` chart revolutions.
inline Cycle tracked_loop(const FamilyCurve& c, cplx center, double radius, int turns,
                          bool clockwise, int n_per_turn = 256) {
  Cycle cyc;
  cyc.chart_winding = turns;
  ChartPath& p = cyc.path;
  const int n = n_per_turn * turns;
  for (int i = 0; i <= n; ++i) {
    const double t = 2.0 * kPi * turns * i / n * (clockwise ? -1.0 : 1.0);
    p.samples.push_back(center + radius * std::exp(cplx(0, t)));
  }
  if (c.kind != curve_kind::planar) {
    p.lifts.resize(p.samples.size());
    double arg_prev = 0.0;
    for (size_t i = 0; i < p.samples.size(); ++i) {
      const cplx w = c.sheet_rhs(p.samples[i]);
      double a = std::arg(w);
      if (i > 0) {
        while (a - arg_prev > kPi) a -= 2.0 * kPi;
        while (a - arg_prev < -kPi) a += 2.0 * kPi;
      }
      arg_prev = a;
      const double r = std::abs(w);
      p.lifts[i] = (c.kind == curve_kind::mkx)
                       ? std::pow(r, -1.0 / c.k) * std::exp(cplx(0, -a / c.k))
                       : std::sqrt(r) * std::exp(cplx(0, a / 2));
    }
  }
  p.closed = true;
  p.start = SurfacePoint{p.samples.front(),
                         p.lifts.empty() ? cplx(0, 0) : p.lifts.front(), std::nullopt};
  return cyc;
}

inline Cycle planar_loop(cplx center, double radius, bool at_infinity,
                         const std::string& puncture, int n = 256) {
  Cycle cyc;
  cyc.label = cycle_label::end_loop;
  cyc.puncture = puncture;
  cyc.chart_winding = 1;
  for (int i = 0; i <= n; ++i) {
    const double t = 2.0 * kPi * i / n * (at_infinity ? -1.0 : 1.0);
    cyc.path.samples.push_back(center + radius * std::exp(cplx(0, t)));
  }
  cyc.path.closed = true;
  cyc.path.start = SurfacePoint{cyc.path.samples.front(), cplx(0, 0), std::nullopt};
  return cyc;
}

inline PunctureInfo puncture(std::string id, end_type t, int normal, cplx loc,
                             bool at_inf, int winding = 1) {
  PunctureInfo p;
  p.id = std::move(id);
  p.type = t;
  p.limit_normal = normal;
  p.chart_location = loc;
  p.at_infinity = at_inf;
  p.chart_winding = winding;
  return p;
}

inline double get_param(const std::map<std::string, double>& params, const std::string& key,
                        double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// individual constructors

inline WeierstrassBundle make_catenoid() {
  WeierstrassBundle b;
  b.name = "catenoid";
  b.domain = FamilyCurve::planar_domain();
  b.g_eval = [](const SurfacePoint& p) { return p.z; };
  b.dh_eval = [](const SurfacePoint& p) { return 1.0 / p.z; };
  b.dlogg_eval = [](const SurfacePoint& p) { return 1.0 / p.z; };
  b.punctures = {detail::puncture("bottom", end_type::catenoid_end, -1, {0, 0}, false),
                 detail::puncture("top", end_type::catenoid_end, +1, {0, 0}, true)};
  b.genus = 0;
  b.gauss_degree = 1;
  b.embedded = true;
  Cycle c0 = detail::planar_loop({0, 0}, 1.0, false, "bottom");
  Cycle c1 = detail::planar_loop({0, 0}, 64.0, true, "top");
  b.basis = {c0, c1};
  return b;
}

inline WeierstrassBundle make_helicoid() {
  WeierstrassBundle b = conjugate(make_catenoid());
  b.name = "helicoid";
  b.embedded = true;   // embedded as the multivalued surface
  b.well_posed = false;  // single-valued periods fail; mesh on a cut domain
  return b;
}

inline WeierstrassBundle make_assoc_catenoid(double theta) {
  WeierstrassBundle b = associate(make_catenoid(), theta);
  b.name = "assoc_catenoid";
  b.embedded = false;
  b.params["theta"] = theta;
  return b;
}

inline WeierstrassBundle make_enneper() {
  WeierstrassBundle b;
  b.name = "enneper";
  b.domain = FamilyCurve::planar_domain();
  b.g_eval = [](const SurfacePoint& p) { return p.z; };
  b.dh_eval = [](const SurfacePoint& p) { return p.z; };
  b.dlogg_eval = [](const SurfacePoint& p) { return 1.0 / p.z; };
  b.punctures = {detail::puncture("end", end_type::non_embedded_end, +1, {0, 0}, true)};
  b.genus = 0;
  b.gauss_degree = 1;
  b.embedded = false;
  b.basis = {detail::planar_loop({0, 0}, 64.0, true, "end")};
  return b;
}

inline WeierstrassBundle make_k_enneper(int k) {
  if (k < 1) throw error(errc::param_out_of_range, "k_enneper: k >= 1");
  WeierstrassBundle b;
  b.name = "k_enneper";
  b.domain = FamilyCurve::planar_domain();
  b.g_eval = [k](const SurfacePoint& p) { return std::pow(p.z, k); };
  b.dh_eval = [k](const SurfacePoint& p) { return std::pow(p.z, k); };
  b.dlogg_eval = [k](const SurfacePoint& p) { return double(k) / p.z; };
  b.punctures = {detail::puncture("end", end_type::non_embedded_end, +1, {0, 0}, true)};
  b.genus = 0;
  b.gauss_degree = k;
  b.embedded = false;
  b.params["k"] = k;
  b.basis = {detail::planar_loop({0, 0}, 64.0, true, "end")};
  return b;
}

inline WeierstrassBundle make_chen_gackstatter() {
  WeierstrassBundle b;
  b.name = "chen_gackstatter";
  b.domain = FamilyCurve::chen_gackstatter_curve();
  const double rho = chen_gackstatter_rho();
  b.g_eval = [rho](const SurfacePoint& p) { return rho * p.u; };
  b.dh_eval = [](const SurfacePoint&) { return cplx(1, 0); };
  b.dlogg_eval = [](const SurfacePoint& p) {
    const cplx z = p.z;
    return 0.5 * (1.0 / z - 1.0 / (z - 1.0) - 1.0 / (z + 1.0));
  };
  b.punctures = {detail::puncture("end", end_type::non_embedded_end, +1, {0, 0}, true, 2)};
  b.genus = 1;
  b.gauss_degree = 2;
  b.embedded = false;
  b.params["rho"] = rho;
  b.symmetry = {SymmetryElement::reflection()};
  b.basis = homology_basis(b.domain);
  return b;
}

inline WeierstrassBundle make_n_noid(int n) {
  if (n < 2) throw error(errc::param_out_of_range, "n_noid: n >= 2");
  WeierstrassBundle b;
  b.name = "n_noid";
  b.domain = FamilyCurve::planar_domain();
  b.g_eval = [n](const SurfacePoint& p) { return std::pow(p.z, n - 1); };
  // dz / (z (z^n + z^-n + 2)) = z^{n-1} dz / (z^n + 1)^2
  b.dh_eval = [n](const SurfacePoint& p) {
    const cplx zn = std::pow(p.z, n);
    return std::pow(p.z, n - 1) / ((zn + 1.0) * (zn + 1.0));
  };
  b.dlogg_eval = [n](const SurfacePoint& p) { return double(n - 1) / p.z; };
  const double r_loop = 0.5 * std::sin(kPi / n);
  for (int j = 0; j < n; ++j) {
    const cplx zj = std::exp(cplx(0, kPi * (2 * j + 1) / n));  // z^n = -1
    b.punctures.push_back(detail::puncture("end" + std::to_string(j),
                                           end_type::catenoid_end, 0, zj, false));
    b.basis.push_back(detail::planar_loop(zj, r_loop, false, "end" + std::to_string(j)));
  }
  b.genus = 0;
  b.gauss_degree = n - 1;
  // each pair of non-parallel catenoid ends eventually intersects (n >= 3);
  // n = 2 is a catenoid in a rotated frame, kept with the family flag
  b.embedded = false;
  b.params["n"] = n;
  return b;
}

inline WeierstrassBundle make_mkx(int k, double alpha) {
  const FamilySolution sol = solve_family(k, alpha);
  WeierstrassBundle b;
  b.name = "mkx";
  b.domain = FamilyCurve::mkx_curve(k, alpha);
  const double m = sol.m, rho = sol.rho, x = sol.x;
  b.g_eval = [rho, m](const SurfacePoint& p) {
    return rho * p.z / (p.u * (m * p.z + 1.0));
  };
  // u^k (mz+1) dz / z = -(x + 1/x)(mz+1) dz / ((z - x)(z + 1/x))
  b.dh_eval = [m, x](const SurfacePoint& p) {
    const cplx z = p.z;
    return -(x + 1.0 / x) * (m * z + 1.0) / ((z - x) * (z + 1.0 / x));
  };
  // dlog g = -du/u + dz/z - m dz/(mz+1), with
  // du/u = (1/k)(1/z - 1/(z-x) - 1/(z+1/x)) dz from the curve relation
  b.dlogg_eval = [k, m, x](const SurfacePoint& p) {
    const cplx z = p.z;
    const cplx dlu = (1.0 / z - 1.0 / (z - x) - 1.0 / (z + 1.0 / x)) / double(k);
    return -dlu + 1.0 / z - m / (m * z + 1.0);
  };
  const end_type middle_t = sol.flat_middle ? end_type::flat_end : end_type::catenoid_end;
  b.punctures = {
      detail::puncture("bottom", end_type::catenoid_end, -1, {x, 0}, false, k),
      detail::puncture("top", end_type::catenoid_end, -1, {-1.0 / x, 0}, false, k),
      detail::puncture("middle", middle_t, +1, {0, 0}, true, k)};
  b.genus = k - 1;
  b.gauss_degree = k + 1;
  b.embedded = sol.growth_condition_ok;
  b.params = {{"k", double(k)}, {"alpha", alpha},     {"x", x},
              {"m", m},         {"rho", rho},         {"growth_bottom", sol.growth_bottom},
              {"growth_middle", sol.growth_middle},   {"growth_top", sol.growth_top}};
  b.symmetry.push_back(SymmetryElement::reflection());
  for (int j = 1; j < k; ++j) b.symmetry.push_back(SymmetryElement::tau(j));
  b.basis = homology_basis(b.domain);
  return b;
}

inline WeierstrassBundle make_mk(int k) {
  WeierstrassBundle b = make_mkx(k, kPi / 4);
  b.name = "mk";
  return b;
}

inline WeierstrassBundle make_lr_limit(int k, double a, bool flat) {
  if (k < 2 || !(a > 0.0))
    throw error(errc::param_out_of_range, "lr_limit: k >= 2, a > 0");
  WeierstrassBundle b;
  b.name = flat ? "lr_limit_flat" : "lr_limit_regular";
  b.domain = FamilyCurve::planar_domain();
  b.g_eval = [k](const SurfacePoint& p) { return std::pow(p.z, k); };
  const int dh_pow = flat ? k - 2 : k;
  b.dh_eval = [a, dh_pow](const SurfacePoint& p) { return a * std::pow(p.z, dh_pow); };
  b.dlogg_eval = [k](const SurfacePoint& p) { return double(k) / p.z; };
  b.punctures = {detail::puncture("end", end_type::non_embedded_end, +1, {0, 0}, true)};
  if (flat)  // the zero of dh no longer matches the zero of g at 0: extra end
    b.punctures.push_back(detail::puncture("origin", end_type::flat_end, -1, {0, 0}, false));
  b.genus = 0;
  b.gauss_degree = k;
  b.embedded = false;
  b.params = {{"k", double(k)}, {"a", a}};
  b.basis = {detail::planar_loop({0, 0}, 64.0, true, "end")};
  if (flat) b.basis.push_back(detail::planar_loop({0, 0}, 1.0 / 64, false, "origin"));
  return b;
}

inline WeierstrassBundle make_neg_lopezros(double r) {
  if (!(r > 0.0)) throw error(errc::param_out_of_range, "neg_lopezros_attempt: r > 0");
  WeierstrassBundle b;
  b.name = "neg_lopezros_attempt";
  b.domain = FamilyCurve::planar_domain();
  b.g_eval = [r](const SurfacePoint& p) { return r * (p.z - 1.0) / (p.z + 1.0); };
  b.dh_eval = [](const SurfacePoint&) { return cplx(1, 0); };
  b.dlogg_eval = [](const SurfacePoint& p) { return 2.0 / (p.z * p.z - 1.0); };
  b.punctures = {detail::puncture("right", end_type::flat_end, -1, {1, 0}, false),
                 detail::puncture("left", end_type::flat_end, +1, {-1, 0}, false),
                 detail::puncture("outer", end_type::non_embedded_end, 0, {0, 0}, true)};
  b.genus = 0;
  b.gauss_degree = 1;
  b.embedded = false;
  b.well_posed = false;
  b.params["r"] = r;
  b.basis = {detail::planar_loop({1, 0}, 0.5, false, "right"),
             detail::planar_loop({-1, 0}, 0.5, false, "left"),
             detail::planar_loop({0, 0}, 64.0, true, "outer")};
  return b;
}

inline WeierstrassBundle make_neg_schoen(double r) {
  if (!(r > 1.0)) throw error(errc::param_out_of_range, "neg_schoen_attempt: r > 1");
  WeierstrassBundle b;
  b.name = "neg_schoen_attempt";
  b.domain = FamilyCurve::sqrt_rational_curve(r);
  b.g_eval = [](const SurfacePoint& p) { return p.u; };
  b.dh_eval = [](const SurfacePoint& p) { return 1.0 / (p.z * p.z - 1.0); };
  b.dlogg_eval = [r](const SurfacePoint& p) {
    const cplx z = p.z;
    return 0.5 * (1.0 / (z - 1.0) + 1.0 / (z - r) - 1.0 / (z + 1.0) - 1.0 / (z + r));
  };
  b.punctures = {detail::puncture("right", end_type::catenoid_end, -1, {1, 0}, false, 2),
                 detail::puncture("left", end_type::catenoid_end, +1, {-1, 0}, false, 2)};
  b.genus = 1;
  b.gauss_degree = 2;
  b.embedded = false;
  b.well_posed = false;
  b.params["r"] = r;
  // homology cycle enclosing the branch pair {1, r}; u is single-valued on it
  Cycle cyc = detail::tracked_loop(b.domain, cplx(0.5 * (1.0 + r), 0),
                                   0.5 * (r - 1.0) + 0.5, 1, false);
  cyc.label = cycle_label::gamma1;
  b.basis = {cyc};
  return b;
}

// The horizontal period around the catenoid ends of the flat-end example
// vanishes exactly when rho^2 = (1 - r^2)(3 + r^2) (residues of g^-1 dh and
// g dh at z = 1 balance); solving for rho given r closes the one-parameter
// period problem.
inline double immersed_flat_end_rho(double r) {
  if (!(r > 0.0 && r < 1.0))
    throw error(errc::param_out_of_range, "immersed_flat_end_rho: need 0 < r < 1");
  return std::sqrt((1.0 - r * r) * (3.0 + r * r));
}

inline WeierstrassBundle make_immersed_flat_end(double rho, double r) {
  if (!(rho > 0.0) || !(r > 0.0) || r == 1.0)
    throw error(errc::param_out_of_range, "immersed_flat_end: rho > 0, r > 0, r != 1");
  WeierstrassBundle b;
  b.name = "immersed_flat_end";
  b.domain = FamilyCurve::planar_domain();
  b.g_eval = [rho, r](const SurfacePoint& p) { return rho / ((p.z - r) * (p.z + r)); };
  b.dh_eval = [r](const SurfacePoint& p) {
    const cplx d = p.z * p.z - 1.0;
    return (p.z * p.z - r * r) / (d * d);
  };
  b.dlogg_eval = [r](const SurfacePoint& p) { return -2.0 * p.z / (p.z * p.z - r * r); };
  b.punctures = {detail::puncture("right", end_type::catenoid_end, 0, {1, 0}, false),
                 detail::puncture("left", end_type::catenoid_end, 0, {-1, 0}, false),
                 detail::puncture("flat", end_type::flat_end, -1, {0, 0}, true)};
  b.genus = 0;
  b.gauss_degree = 2;
  b.embedded = false;
  b.params = {{"rho", rho}, {"r", r}};
  const double rl = 0.25 * std::min(1.0, std::fabs(r - 1.0));
  b.basis = {detail::planar_loop({1, 0}, rl, false, "right"),
             detail::planar_loop({-1, 0}, rl, false, "left"),
             detail::planar_loop({0, 0}, std::max(64.0, 4.0 * r), true, "flat")};
  return b;
}

// ---------------------------------------------------------------------------
// dispatch

inline WeierstrassBundle make_surface(const std::string& name,
                                      const std::map<std::string, double>& params = {}) {
  using detail::get_param;
  if (name == "catenoid") return make_catenoid();
  if (name == "helicoid") return make_helicoid();
  if (name == "assoc_catenoid") return make_assoc_catenoid(get_param(params, "theta", kPi / 4));
  if (name == "enneper") return make_enneper();
  if (name == "k_enneper") return make_k_enneper(int(get_param(params, "k", 2)));
  if (name == "chen_gackstatter") return make_chen_gackstatter();
  if (name == "n_noid") return make_n_noid(int(get_param(params, "n", 3)));
  if (name == "mk") return make_mk(int(get_param(params, "k", 2)));
  if (name == "mkx")
    return make_mkx(int(get_param(params, "k", 2)), get_param(params, "alpha", kPi / 4));
  if (name == "lr_limit_regular")
    return make_lr_limit(int(get_param(params, "k", 2)), get_param(params, "a", 1.0), false);
  if (name == "lr_limit_flat")
    return make_lr_limit(int(get_param(params, "k", 2)), get_param(params, "a", 1.0), true);
  if (name == "neg_lopezros_attempt") return make_neg_lopezros(get_param(params, "r", 1.0));
  if (name == "neg_schoen_attempt") return make_neg_schoen(get_param(params, "r", 2.0));
  if (name == "immersed_flat_end") {
    const double r = get_param(params, "r", 0.5);
    return make_immersed_flat_end(get_param(params, "rho", immersed_flat_end_rho(r)), r);
  }
  throw error(errc::unknown_entry, "make_surface: unknown catalog name " + name);
}

inline std::vector<CatalogEntry> list_catalog() {
  auto rec = [](double tc, int genus, int ends, int deg, bool emb, int idx) {
    ExpectedRecord e;
    e.total_curvature = tc; e.genus = genus; e.ends = ends; e.degree = deg;
    e.embedded = emb; e.index = idx;
    return e;
  };
  const double pi4 = 4.0 * kPi;
  std::vector<CatalogEntry> out;
  out.push_back({"catenoid", {}, {}, rec(-pi4, 0, 2, 1, true, 1), true});
  out.push_back({"helicoid", {}, {}, rec(-pi4, 0, 2, 1, true, 1), false});
  out.push_back({"assoc_catenoid", {"theta"}, {{"theta", kPi / 4}},
                 rec(-pi4, 0, 2, 1, false, 1), false});
  out.push_back({"enneper", {}, {}, rec(-pi4, 0, 1, 1, false, 1), true});
  out.push_back({"k_enneper", {"k"}, {{"k", 2}}, rec(-2 * pi4, 0, 1, 2, false, -1), true});
  out.push_back({"chen_gackstatter", {}, {}, rec(-2 * pi4, 1, 1, 2, false, 3), true});
  out.push_back({"n_noid", {"n"}, {{"n", 3}}, rec(-2 * pi4, 0, 3, 2, false, 3), true});
  out.push_back({"mk", {"k"}, {{"k", 2}}, rec(-3 * pi4, 1, 3, 3, true, -1), true});
  out.push_back({"mkx", {"k", "alpha"}, {{"k", 2}, {"alpha", kPi / 4}},
                 rec(-3 * pi4, 1, 3, 3, true, -1), true});
  out.push_back({"lr_limit_regular", {"k", "a"}, {{"k", 2}, {"a", 1.0}},
                 rec(-2 * pi4, 0, 1, 2, false, -1), true});
  out.push_back({"lr_limit_flat", {"k", "a"}, {{"k", 2}, {"a", 1.0}},
                 rec(-2 * pi4, 0, 2, 2, false, -1), true});
  out.push_back({"neg_lopezros_attempt", {"r"}, {{"r", 1.0}},
                 rec(-pi4, 0, 3, 1, false, -1), false});
  out.push_back({"neg_schoen_attempt", {"r"}, {{"r", 2.0}},
                 rec(-2 * pi4, 1, 2, 2, false, -1), false});
  out.push_back({"immersed_flat_end", {"rho", "r"},
                 {{"rho", std::sqrt((1.0 - 0.25) * (3.0 + 0.25))}, {"r", 0.5}},
                 rec(-2 * pi4, 0, 3, 2, false, -1), true});
  return out;
}

}  // namespace minsurf

#endif  // MINSURF_CATALOG_HPP
