// weierstrass.hpp -- evaluation of Weierstrass data and the induced geometry:
// Phi, path-integrated immersion, metric density, Gauss curvature, second
// fundamental form, associate/conjugate family, Lopez-Ros deformation.
#ifndef MINSURF_WEIERSTRASS_HPP
#define MINSURF_WEIERSTRASS_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"
#include "riemann_domain.hpp"

namespace minsurf {

enum class end_type { catenoid_end, flat_end, non_embedded_end };

struct PunctureInfo {
  std::string id;
  end_type type = end_type::catenoid_end;
  int limit_normal = +1;    // +1 up, -1 down (0 when not vertical)
  cplx chart_location{0, 0};
  bool at_infinity = false;
  int chart_winding = 1;    // chart turns of the end loop (k for ramified mkx ends)
};

struct WeierstrassBundle {
  std::string name;
  FamilyCurve domain;
  std::function<cplx(const SurfacePoint&)> g_eval;      // stereographic Gauss map
  std::function<cplx(const SurfacePoint&)> dh_eval;     // omega with dh = omega dz
  std::function<cplx(const SurfacePoint&)> dlogg_eval;  // (dg/g)/dz chart density
  std::vector<PunctureInfo> punctures;
  int genus = 0;
  int gauss_degree = 0;  // degree of the extended Gauss map
  std::vector<SymmetryElement> symmetry;
  std::vector<Cycle> basis;
  std::map<std::string, double> params;
  bool embedded = false;
  bool well_posed = true;   // false for the deliberately period-broken entries
  bool negate = false;      // conjugate bundles carry X* = -X_{pi/2}

  const PunctureInfo* find_puncture(const std::string& id) const {
    for (const auto& p : punctures)
      if (p.id == id) return &p;
    return nullptr;
  }
};

struct ImmersionSample {
  SurfacePoint point;
  vec3 X;
  vec3 N;
  double K = 0;
  double ds_density = 0;  // 1/4 (|g|+|g|^-1)^2 |omega|, per the metric formula
};

// ---------------------------------------------------------------------------
// pointwise evaluation

// Phi = ((g^-1 - g) dh/2, i (g^-1 + g) dh/2, dh), returned as a density per dz.
inline cvec3 eval_phi(const WeierstrassBundle& b, const SurfacePoint& p) {
  if (p.is_puncture())
    throw error(errc::singular_point, "eval_phi at a puncture");
  const cplx g = b.g_eval(p);
  const cplx w = b.dh_eval(p);
  const double ag = std::abs(g);
  if (!(ag > 0.0) || !std::isfinite(ag)) {
    // a zero/pole of g is only admissible where dh compensates; the regular
    // points of the catalog never evaluate Phi exactly there
    throw error(errc::singular_point, "eval_phi: g has a zero/pole at the sample");
  }
  const cplx gi = 1.0 / g;
  cvec3 phi{0.5 * (gi - g) * w, cplx(0, 0.5) * (gi + g) * w, w};
  if (b.negate) phi = phi * cplx(-1.0, 0.0);
  return phi;
}

// Unit normal via inverse stereographic projection of g.
inline vec3 normal_from_g(cplx g) {
  const double a2 = std::norm(g);
  if (!std::isfinite(a2)) return {0, 0, 1};
  const double d = 1.0 / (a2 + 1.0);
  return {2.0 * g.real() * d, 2.0 * g.imag() * d, (a2 - 1.0) * d};
}

// Metric factor per |dz| as stated by the metric formula: 1/4 (|g|+1/|g|)^2 |omega|.
inline double metric_density(const WeierstrassBundle& b, const SurfacePoint& p) {
  const cplx g = b.g_eval(p);
  const cplx w = b.dh_eval(p);
  const double ag = std::abs(g);
  if (!(ag > 0.0) || !std::isfinite(ag))
    throw error(errc::singular_point, "metric_density: zero/pole of g");
  const double s = ag + 1.0 / ag;
  return 0.25 * s * s * std::abs(w);
}

// Length element ds per |dz| (used where genuine arc length is needed).
inline double length_density(const WeierstrassBundle& b, const SurfacePoint& p) {
  const cplx g = b.g_eval(p);
  const cplx w = b.dh_eval(p);
  const double ag = std::abs(g);
  if (!(ag > 0.0) || !std::isfinite(ag))
    throw error(errc::singular_point, "length_density: zero/pole of g");
  return 0.5 * (ag + 1.0 / ag) * std::abs(w);
}

// K = -16 (|g|+1/|g|)^-4 |(dg/g)/omega|^2  (always <= 0).
inline double gauss_curvature(const WeierstrassBundle& b, const SurfacePoint& p) {
  const cplx g = b.g_eval(p);
  const cplx w = b.dh_eval(p);
  const cplx dlg = b.dlogg_eval(p);
  const double ag = std::abs(g);
  if (!(ag > 0.0) || !std::isfinite(ag) || std::abs(w) == 0.0)
    throw error(errc::singular_point, "gauss_curvature: singular sample");
  const double s = ag + 1.0 / ag;
  const double q = std::abs(dlg / w);
  return -16.0 * q * q / (s * s * s * s);
}

// <S(V),V> = Re{ (dg/g)(V) * dh(V) } for a chart tangent V.
inline double second_form(const WeierstrassBundle& b, const SurfacePoint& p, cplx tangent) {
  const cplx dlg = b.dlogg_eval(p);
  const cplx w = b.dh_eval(p);
  return (dlg * tangent * w * tangent).real();
}

enum class curve_class { asymptotic, principal, neither };

// A sampled chart curve is principal when (dg/g)(c') dh(c') is real along it,
// asymptotic when purely imaginary.
inline curve_class classify_curve(const WeierstrassBundle& b, const ChartPath& path,
                                  double angle_tol = 1e-6) {
  bool all_real = true, all_imag = true;
  for (size_t i = 0; i + 1 < path.samples.size(); ++i) {
    const cplx z = path.samples[i];
    const cplx v = path.samples[i + 1] - path.samples[i];
    SurfacePoint p;
    if (b.domain.kind == curve_kind::planar) {
      p = SurfacePoint{z, cplx(0, 0), std::nullopt};
    } else if (!path.lifts.empty()) {
      p = SurfacePoint{z, path.lifts[i], std::nullopt};
    } else {
      p = lift_point(b.domain, z, path.start.u);
    }
    const cplx q = b.dlogg_eval(p) * v * b.dh_eval(p) * v;
    const double a = std::abs(q);
    if (a == 0.0) continue;  // flat point: constrains nothing
    const double ang = std::atan2(std::fabs(q.imag()), std::fabs(q.real()));
    if (ang > angle_tol) all_real = false;               // not on the real axis
    if (kPi / 2 - ang > angle_tol) all_imag = false;     // not on the imaginary axis
  }
  if (all_real) return curve_class::principal;
  if (all_imag) return curve_class::asymptotic;
  return curve_class::neither;
}

// ---------------------------------------------------------------------------
// path integration

namespace detail {
// Evaluate a lift along the straight chart segment [za,zb] given endpoint
// lifts; nearest-root selection against the linear interpolant keeps the
// sheet consistent for short segments.
inline SurfacePoint lift_on_segment(const FamilyCurve& c, cplx za, cplx ua, cplx zb, cplx ub,
                                    double t) {
  const cplx z = za + (zb - za) * t;
  if (c.kind == curve_kind::planar) return SurfacePoint{z, cplx(0, 0), std::nullopt};
  const cplx u_lin = ua + (ub - ua) * t;
  std::vector<cplx> cand = c.sheet_candidates(z);
  int best = 0;
  double dbest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < (int)cand.size(); ++i) {
    const double d = std::abs(cand[i] - u_lin);
    if (d < dbest) { dbest = d; best = i; }
  }
  return SurfacePoint{z, refine_root(c, z, cand[best]), std::nullopt};
}
}  // namespace detail

// Complex line integral of Phi over a chart path (per-segment adaptive
// quadrature). Returns the full complex integral; Re is the immersion
// displacement, Im enters flux.
inline cvec3 integrate_phi(const WeierstrassBundle& b, const ChartPath& path,
                           double quad_tol = 1e-10) {
  cvec3 total;
  if (path.samples.size() < 2) return total;
  std::vector<cplx> lifts = path.lifts;
  if (lifts.empty() && b.domain.kind != curve_kind::planar) {
    const std::vector<SurfacePoint> pts = continue_branch(b.domain, path);
    lifts.reserve(pts.size());
    for (const auto& p : pts) lifts.push_back(p.u);
  }
  quad_options opt;
  opt.abs_tol = quad_tol / std::max<size_t>(1, path.samples.size() - 1);
  for (size_t i = 0; i + 1 < path.samples.size(); ++i) {
    const cplx za = path.samples[i], zb = path.samples[i + 1];
    if (za == zb) continue;
    const cplx ua = lifts.empty() ? cplx(0, 0) : lifts[i];
    const cplx ub = lifts.empty() ? cplx(0, 0) : lifts[i + 1];
    const cplx dz = zb - za;
    auto f = [&](double t) -> cvec3 {
      const SurfacePoint p = detail::lift_on_segment(b.domain, za, ua, zb, ub, t);
      return eval_phi(b, p) * dz;
    };
    total += integrate_adaptive<cvec3>(f, 0.0, 1.0, opt);
  }
  return total;
}

// X-displacement along the path: Re integral of Phi.
inline vec3 integrate_immersion(const WeierstrassBundle& b, const ChartPath& path,
                                double quad_tol = 1e-10) {
  return integrate_phi(b, path, quad_tol).real();
}

// ---------------------------------------------------------------------------
// deformations

// Associate family {g, e^{i theta} dh}. Metric density is unchanged;
// period-freeness is generally lost.
inline WeierstrassBundle associate(const WeierstrassBundle& b, double theta) {
  WeierstrassBundle out = b;
  if (theta == 0.0) return out;
  const cplx f = std::exp(cplx(0, theta));
  auto base = b.dh_eval;
  out.dh_eval = [base, f](const SurfacePoint& p) { return f * base(p); };
  out.params["theta"] = theta;
  out.name = b.name + "_assoc";
  out.well_posed = false;  // periods must be re-checked by the caller
  return out;
}

// Conjugate surface X* = -X_{pi/2}.
inline WeierstrassBundle conjugate(const WeierstrassBundle& b) {
  WeierstrassBundle out = associate(b, kPi / 2);
  out.negate = !out.negate;
  out.name = b.name + "_conj";
  return out;
}

// Lopez-Ros deformation g_lambda = lambda g, dh_lambda = dh.
inline WeierstrassBundle lopez_ros(const WeierstrassBundle& b, double lambda) {
  if (!(lambda > 0.0)) throw error(errc::param_out_of_range, "lopez_ros needs lambda > 0");
  WeierstrassBundle out = b;
  if (lambda == 1.0) return out;
  auto base = b.g_eval;
  out.g_eval = [base, lambda](const SurfacePoint& p) { return lambda * base(p); };
  // dlog g is unchanged: d(log(lambda g)) = d(log g)
  out.params["lambda"] = lambda;
  out.name = b.name + "_lr";
  return out;
}

// Immersion sample with normal and curvature (X must be supplied by the
// caller's integration bookkeeping; this fills the pointwise fields).
inline ImmersionSample sample_geometry(const WeierstrassBundle& b, const SurfacePoint& p,
                                       vec3 X) {
  ImmersionSample s;
  s.point = p;
  s.X = X;
  s.N = normal_from_g(b.g_eval(p));
  s.K = gauss_curvature(b, p);
  s.ds_density = metric_density(b, p);
  return s;
}

}  // namespace minsurf

#endif  // MINSURF_WEIERSTRASS_HPP
