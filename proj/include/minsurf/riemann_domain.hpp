// riemann_domain.hpp -- concrete Riemann surfaces as algebraic curves over
// the z-chart: sheet lifting, branch-continuation along paths, symmetry
// actions and homology bases.
//
// Supported curves:
//   * the three-ended family curve  z^-1 - z = (x + x^-1) u^-k - (x - x^-1),
//     x = cot(alpha), 0 < x <= 1  (a k-sheeted cover of the z-sphere);
//   * the square torus  u^2 = z/((z-1)(z+1))  (genus-one double cover);
//   * plain planar domains (subsets of C; no second coordinate).
#ifndef MINSURF_RIEMANN_DOMAIN_HPP
#define MINSURF_RIEMANN_DOMAIN_HPP

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"

namespace minsurf {

// Numeric policy shared by the domain operations.
struct domain_tols {
  double tol_curve = 1e-12;      // relative curve-residual bound
  double tie_tol = 1e-6;         // relative sheet-selection tie threshold
  double clearance_min = 1e-3;   // z-chart clearance to branch values
  double min_step = 1e-8;        // step-halving floor (arc length)
};

enum class curve_kind { mkx, chen_gackstatter, sqrt_rational, planar };

struct FamilyCurve {
  curve_kind kind = curve_kind::planar;
  int k = 2;          // number of symmetry planes (mkx); 2 for the torus cover
  double alpha = 0;   // in [pi/4, pi/2) for mkx
  double x = 0;       // cot(alpha), 0 < x <= 1 for mkx

  static FamilyCurve mkx_curve(int k, double alpha) {
    if (k < 2) throw error(errc::param_out_of_range, "mkx curve requires k >= 2");
    if (!(alpha >= kPi / 4 - 1e-15 && alpha < kPi / 2))
      throw error(errc::degenerate_alpha, "alpha outside [pi/4, pi/2)");
    FamilyCurve c;
    c.kind = curve_kind::mkx;
    c.k = k;
    c.alpha = alpha;
    c.x = 1.0 / std::tan(alpha);
    return c;
  }
  static FamilyCurve chen_gackstatter_curve() {
    FamilyCurve c;
    c.kind = curve_kind::chen_gackstatter;
    c.k = 2;
    return c;
  }
  // Double cover u^2 = (1-z)(r-z)/((1+z)(r+z)) carrying the square root of
  // the Schoen-style trial Gauss map; r > 1. The branch parameter reuses the
  // x slot.
  static FamilyCurve sqrt_rational_curve(double r) {
    if (!(r > 1.0)) throw error(errc::param_out_of_range, "sqrt_rational curve needs r > 1");
    FamilyCurve c;
    c.kind = curve_kind::sqrt_rational;
    c.k = 2;
    c.x = r;
    return c;
  }
  static FamilyCurve planar_domain() { return FamilyCurve{}; }

  int sheet_count() const { return kind == curve_kind::mkx ? k
                                 : kind == curve_kind::planar ? 1 : 2; }

  // Explicit right-hand side solved for u^-k (mkx) or u^2 (torus).
  // mkx:   u^-k = w(z) = ((1/z - z) + (x - 1/x)) / (x + 1/x)
  //             = -(z - x)(z + 1/x) / ((x + 1/x) z)
  // torus: u^2  = z/((z-1)(z+1))
  cplx sheet_rhs(cplx z) const {
    if (kind == curve_kind::mkx) {
      return ((1.0 / z - z) + (x - 1.0 / x)) / (x + 1.0 / x);
    }
    if (kind == curve_kind::chen_gackstatter) {
      return z / ((z - 1.0) * (z + 1.0));
    }
    if (kind == curve_kind::sqrt_rational) {
      return (1.0 - z) * (x - z) / ((1.0 + z) * (x + z));
    }
    return cplx(0, 0);
  }

  // Residual of the defining relation at (z,u), normalized by the magnitude
  // of its terms so the tol_curve bound is relative.
  double residual(cplx z, cplx u) const {
    if (kind == curve_kind::planar) return 0.0;
    if (kind == curve_kind::mkx) {
      const cplx lhs = (x + 1.0 / x) * std::pow(u, -k);
      const cplx rhs = (1.0 / z - z) + (x - 1.0 / x);
      const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
      return std::abs(lhs - rhs) / scale;
    }
    const cplx lhs = u * u;
    const cplx rhs = sheet_rhs(z);
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
    return std::abs(lhs - rhs) / scale;
  }

  // All sheet candidates for u over a regular chart point.
  std::vector<cplx> sheet_candidates(cplx z) const {
    std::vector<cplx> out;
    if (kind == curve_kind::planar) {
      out.push_back(cplx(0, 0));
      return out;
    }
    if (kind == curve_kind::mkx) {
      // u = w^{-1/k} times the k-th roots of unity
      const cplx w = sheet_rhs(z);
      const cplx u0 = std::exp(-std::log(w) / double(k));
      for (int j = 0; j < k; ++j) {
        const double t = 2.0 * kPi * j / k;
        out.push_back(u0 * cplx(std::cos(t), std::sin(t)));
      }
      return out;
    }
    const cplx u0 = std::sqrt(sheet_rhs(z));
    out.push_back(u0);
    out.push_back(-u0);
    return out;
  }

  // Chart locations where sheet-tracking must keep clearance: points where
  // the u-roots collide (u = 0 or infinity over the chart) plus the branch
  // points of the hyperelliptic projection (z = +-i for mkx).
  std::vector<cplx> branch_values() const {
    if (kind == curve_kind::mkx)
      return {cplx(0, 0), cplx(x, 0), cplx(-1.0 / x, 0), cplx(0, 1), cplx(0, -1)};
    if (kind == curve_kind::chen_gackstatter)
      return {cplx(0, 0), cplx(1, 0), cplx(-1, 0)};
    if (kind == curve_kind::sqrt_rational)
      return {cplx(1, 0), cplx(-1, 0), cplx(x, 0), cplx(-x, 0)};
    return {};
  }
};

struct SurfacePoint {
  cplx z{0, 0};
  cplx u{0, 0};
  std::optional<std::string> at_puncture;  // sentinel id, no (z,u) meaning

  bool is_puncture() const { return at_puncture.has_value(); }
  static SurfacePoint puncture(const std::string& id) {
    SurfacePoint p;
    p.at_puncture = id;
    return p;
  }
};

struct ChartPath {
  std::vector<cplx> samples;    // ordered z-values
  SurfacePoint start;           // lift at samples.front()
  bool closed = false;
  // Optional precomputed lifts (u at each sample). Homology representatives
  // carry these so cycle quadrature never re-runs sheet continuation through
  // delicate regions.
  std::vector<cplx> lifts;
};

enum class cycle_label { gamma1, gamma2, end_loop };

struct Cycle {
  ChartPath path;  // closed
  cycle_label label = cycle_label::end_loop;
  std::string puncture;   // which end, for end loops
  int chart_winding = 1;  // times the loop winds in the z-chart around the end
};

struct SymmetryElement {
  enum class op { reflection_f, rotation_tau_power };
  op kind = op::reflection_f;
  int j = 0;  // exponent mod k for tau powers
  static SymmetryElement reflection() { return {op::reflection_f, 0}; }
  static SymmetryElement tau(int j) { return {op::rotation_tau_power, j}; }
};

// ---------------------------------------------------------------------------
// operations

// Newton refinement of u on the residual of the defining relation (one or two
// steps from an explicit k-th root candidate is plenty).
inline cplx refine_root(const FamilyCurve& c, cplx z, cplx u) {
  if (c.kind == curve_kind::planar) return u;
  for (int it = 0; it < 8; ++it) {
    cplx f, df;
    if (c.kind == curve_kind::mkx) {
      f = std::pow(u, -c.k) - c.sheet_rhs(z);
      df = -double(c.k) * std::pow(u, -c.k - 1);
    } else {
      f = u * u - c.sheet_rhs(z);
      df = 2.0 * u;
    }
    if (std::abs(df) == 0.0) break;
    const cplx step = f / df;
    u -= step;
    if (std::abs(step) < 1e-15 * (std::abs(u) + 1.0)) break;
  }
  return u;
}

inline SurfacePoint lift_point(const FamilyCurve& c, cplx z, cplx sheet_hint,
                               const domain_tols& tols = {}) {
  if (c.kind == curve_kind::planar) return SurfacePoint{z, cplx(0, 0), std::nullopt};
  if (c.kind == curve_kind::mkx) {
    // puncture and saddle sentinels: the ends sit where the u-roots blow up
    if (std::abs(z - cplx(c.x, 0)) == 0.0) return SurfacePoint::puncture("bottom");
    if (std::abs(z + cplx(1.0 / c.x, 0)) == 0.0) return SurfacePoint::puncture("top");
    if (std::abs(z) == 0.0) return SurfacePoint{cplx(0, 0), cplx(0, 0), std::nullopt};  // saddle p0
  }
  std::vector<cplx> cand = c.sheet_candidates(z);
  for (auto& u : cand) u = refine_root(c, z, u);
  // nearest-to-hint selection
  int best = 0, second = -1;
  double dbest = std::numeric_limits<double>::infinity(), dsecond = dbest;
  for (int i = 0; i < (int)cand.size(); ++i) {
    const double d = std::abs(cand[i] - sheet_hint);
    if (d < dbest) { second = best; dsecond = dbest; best = i; dbest = d; }
    else if (d < dsecond) { second = i; dsecond = d; }
  }
  const double scale = std::abs(cand[best]) + std::abs(sheet_hint) + 1e-300;
  if (second >= 0 && (dsecond - dbest) < tols.tie_tol * scale)
    throw error(errc::ambiguous_sheet, "two sheet candidates equally close to hint");
  const cplx u = cand[best];
  if (c.residual(z, u) > tols.tol_curve)
    throw error(errc::no_root_converged, "Newton refinement left curve residual above tolerance");
  return SurfacePoint{z, u, std::nullopt};
}

inline SurfacePoint apply_symmetry(const SymmetryElement& s, const FamilyCurve& c,
                                   const SurfacePoint& p) {
  if (p.is_puncture()) {
    // punctures are fixed by both generators (f and tau fix all three ends)
    return p;
  }
  if (s.kind == SymmetryElement::op::reflection_f)
    return SurfacePoint{std::conj(p.z), std::conj(p.u), std::nullopt};
  const double t = -2.0 * kPi * s.j / c.k;  // epsilon = e^{-2 pi i / k}
  return SurfacePoint{p.z, p.u * cplx(std::cos(t), std::sin(t)), std::nullopt};
}

namespace detail {
inline double clearance(const FamilyCurve& c, cplx z) {
  double d = std::numeric_limits<double>::infinity();
  for (const cplx& b : c.branch_values()) d = std::min(d, std::abs(z - b));
  return d;
}
// Smallest distance between distinct u-candidates at z (root spacing).
inline double root_spacing(const std::vector<cplx>& cand) {
  if (cand.size() < 2) return std::numeric_limits<double>::infinity();
  double d = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < cand.size(); ++i)
    for (size_t j = i + 1; j < cand.size(); ++j)
      d = std::min(d, std::abs(cand[i] - cand[j]));
  return d;
}
}  // namespace detail

// Analytic continuation of the u-sheet along a z-path. Each step picks the
// root nearest the previous u; steps are halved until the jump is small
// against the local root spacing.
inline std::vector<SurfacePoint> continue_branch(const FamilyCurve& c, const ChartPath& path,
                                                 const domain_tols& tols = {}) {
  std::vector<SurfacePoint> out;
  if (path.samples.empty()) return out;
  if (c.kind == curve_kind::planar) {
    for (const cplx& z : path.samples) out.push_back(SurfacePoint{z, cplx(0, 0), std::nullopt});
    return out;
  }
  for (const cplx& z : path.samples)
    if (detail::clearance(c, z) < tols.clearance_min)
      throw error(errc::sheet_jump_detected,
                  "continuation path violates branch-value clearance");
  cplx u_prev = path.start.u;
  out.push_back(SurfacePoint{path.samples.front(), u_prev, std::nullopt});
  for (size_t i = 1; i < path.samples.size(); ++i) {
    cplx z_prev = path.samples[i - 1];
    const cplx z_next = path.samples[i];
    // step-halving walk from z_prev to z_next
    double t = 0.0;
    double step = 1.0;
    while (t < 1.0) {
      bool placed = false;
      while (!placed) {
        const double t_try = std::min(1.0, t + step);
        const cplx z_abs = path.samples[i - 1] + (z_next - path.samples[i - 1]) * t_try;
        std::vector<cplx> cand = c.sheet_candidates(z_abs);
        for (auto& u : cand) u = refine_root(c, z_abs, u);
        int best = 0;
        double dbest = std::numeric_limits<double>::infinity();
        for (int ci = 0; ci < (int)cand.size(); ++ci) {
          const double d = std::abs(cand[ci] - u_prev);
          if (d < dbest) { dbest = d; best = ci; }
        }
        const double spacing = detail::root_spacing(cand);
        if (dbest < 0.5 * spacing) {
          u_prev = cand[best];
          t = t_try;
          z_prev = z_abs;
          placed = true;
          if (step < 0.5) step *= 2.0;  // relax again after success
        } else {
          step *= 0.5;
          const double seg_len = std::abs(z_next - path.samples[i - 1]);
          if (step * seg_len < tols.min_step)
            throw error(errc::sheet_jump_detected,
                        "no root within half the root spacing at minimum step");
        }
      }
    }
    out.push_back(SurfacePoint{z_next, u_prev, std::nullopt});
  }
  if (path.closed && !out.empty()) {
    const double res = std::abs(out.back().u - path.start.u) /
                       (std::abs(path.start.u) + 1.0);
    (void)res;  // callers check monodromy; nothing enforced here
  }
  return out;
}

// ---------------------------------------------------------------------------
// homology representatives
//
// gamma_1 for the mkx curve: the unitary-u cycle. With u = e^{i phi}, the
// defining relation becomes a quadratic z^2 + B(phi) z - 1 = 0,
// B = (x + 1/x) e^{-i k phi} - (x - 1/x), whose two roots are z and -1/z.
// Over phi in [-2 alpha/k, 2 alpha/k] one root branch runs from the branch
// point over z = -i through z_0 > 0 to the branch point over z = +i; the
// loop closes by returning on the opposite branch z -> -1/z. The closed-form
// period reductions are derived on exactly this contour.

namespace detail {
// Both z-roots of the gamma_1 quadratic z^2 + B(phi) z - 1 = 0 at a given
// phi; the two roots are z and -1/z.
inline std::pair<cplx, cplx> gamma1_roots(const FamilyCurve& c, double phi) {
  const double x = c.x;
  const cplx B = (x + 1.0 / x) * std::exp(cplx(0, -c.k * phi)) - (x - 1.0 / x);
  const cplx s = std::sqrt(B * B + 4.0);  // vanishes only at phi = +-2 alpha/k
  return {0.5 * (-B + s), 0.5 * (-B - s)};
}
}  // namespace detail

// Discretized gamma_1 with exact lifts (2n+... samples). One z-branch is
// tracked by continuity from phi = -phi_max to +phi_max (branch point over
// z = -i to branch point over z = +i); the loop returns on the opposite
// branch z -> -1/z. The sin(theta) reparameterization clusters samples near
// the branch points where dz/dphi has a square-root blow-up.
inline Cycle make_gamma1(const FamilyCurve& c, int n = 512) {
  const double phi_max = 2.0 * c.alpha / c.k;
  Cycle cyc;
  cyc.label = cycle_label::gamma1;
  ChartPath& p = cyc.path;
  std::vector<cplx> half_a(n + 1);
  std::vector<double> phis(n + 1);
  cplx z_prev;
  for (int i = 0; i <= n; ++i) {
    const double th = -kPi / 2 + kPi * i / n;
    const double phi = phi_max * std::sin(th) * (1.0 - 1e-12);
    phis[i] = phi;
    auto [r1, r2] = detail::gamma1_roots(c, phi);
    if (i == 0) {
      half_a[0] = r1;  // near the branch point both roots coincide (z ~ -i)
    } else {
      half_a[i] = (std::abs(r1 - z_prev) <= std::abs(r2 - z_prev)) ? r1 : r2;
    }
    z_prev = half_a[i];
  }
  for (int i = 0; i <= n; ++i) {
    p.samples.push_back(half_a[i]);
    p.lifts.push_back(std::exp(cplx(0, phis[i])));
  }
  for (int i = n - 1; i > 0; --i) {
    p.samples.push_back(-1.0 / half_a[i]);
    p.lifts.push_back(std::exp(cplx(0, phis[i])));
  }
  p.samples.push_back(p.samples.front());
  p.lifts.push_back(p.lifts.front());
  p.closed = true;
  p.start = SurfacePoint{p.samples.front(), p.lifts.front(), std::nullopt};
  return cyc;
}

// gamma_2 = image of gamma_1 on the alpha~ = pi/2 - alpha curve under
// (z, u) = (-z~, e^{-i pi/k} u~); both satisfy the original curve relation.
inline Cycle make_gamma2(const FamilyCurve& c, int n = 512) {
  // The auxiliary alpha~ curve may have alpha~ < pi/4; that is fine here
  // (it is only a computational device, not a catalog surface).
  FamilyCurve ct;
  ct.kind = curve_kind::mkx;
  ct.k = c.k;
  ct.alpha = kPi / 2 - c.alpha;
  ct.x = 1.0 / std::tan(ct.alpha);
  Cycle g1 = make_gamma1(ct, n);
  Cycle cyc;
  cyc.label = cycle_label::gamma2;
  const cplx rot = std::exp(cplx(0, -kPi / c.k));
  for (size_t i = 0; i < g1.path.samples.size(); ++i) {
    cyc.path.samples.push_back(-g1.path.samples[i]);
    cyc.path.lifts.push_back(rot * g1.path.lifts[i]);
  }
  cyc.path.closed = true;
  cyc.path.start = SurfacePoint{cyc.path.samples.front(), cyc.path.lifts.front(), std::nullopt};
  return cyc;
}

// Small positively oriented end loop about a puncture, with lifts tracked
// through the full chart winding (k turns at a fully ramified mkx end).
inline Cycle make_end_loop(const FamilyCurve& c, const std::string& puncture,
                           double radius, int n_per_turn = 256) {
  Cycle cyc;
  cyc.label = cycle_label::end_loop;
  cyc.puncture = puncture;
  cplx center;
  bool at_infinity = false;
  if (c.kind == curve_kind::mkx) {
    if (puncture == "bottom") center = cplx(c.x, 0);
    else if (puncture == "top") center = cplx(-1.0 / c.x, 0);
    else if (puncture == "middle") at_infinity = true;
    else throw error(errc::unknown_entry, "unknown mkx puncture: " + puncture);
    cyc.chart_winding = c.k;
  } else if (c.kind == curve_kind::chen_gackstatter) {
    if (puncture != "end") throw error(errc::unknown_entry, "unknown torus puncture");
    at_infinity = true;
    cyc.chart_winding = 2;
  } else {
    center = cplx(0, 0);  // planar catalog entries put the interesting end at 0
    cyc.chart_winding = 1;
  }
  const int turns = cyc.chart_winding;
  const int n = n_per_turn * turns;
  ChartPath& p = cyc.path;
  for (int i = 0; i <= n; ++i) {
    const double t = 2.0 * kPi * turns * i / n;
    cplx z;
    if (at_infinity) {
      // positively oriented about infinity == clockwise in the z-chart
      z = radius * std::exp(cplx(0, -t));
    } else {
      z = center + (radius * std::exp(cplx(0, t)));
    }
    p.samples.push_back(z);
  }
  // lifts by explicit continuous argument tracking of the sheet rhs
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
      if (c.kind == curve_kind::mkx) {
        p.lifts[i] = std::pow(r, -1.0 / c.k) * std::exp(cplx(0, -a / c.k));
      } else {
        p.lifts[i] = std::sqrt(r) * std::exp(cplx(0, a / 2));
      }
    }
  }
  p.closed = true;
  p.start = SurfacePoint{p.samples.front(),
                         p.lifts.empty() ? cplx(0, 0) : p.lifts.front(), std::nullopt};
  return cyc;
}

// Homology basis per the module contract: gamma_1, gamma_2 plus one end loop
// per puncture for mkx; a single end loop for planar one-ended domains.
inline std::vector<Cycle> homology_basis(const FamilyCurve& c) {
  std::vector<Cycle> out;
  if (c.kind == curve_kind::mkx) {
    out.push_back(make_gamma1(c));
    out.push_back(make_gamma2(c));
    const double eps = 1.0 / 64;
    out.push_back(make_end_loop(c, "bottom", eps));
    out.push_back(make_end_loop(c, "top", eps));
    out.push_back(make_end_loop(c, "middle", 64.0));
    return out;
  }
  if (c.kind == curve_kind::chen_gackstatter) {
    out.push_back(make_end_loop(c, "end", 64.0));
    return out;
  }
  out.push_back(make_end_loop(c, "origin", 1.0));
  return out;
}

}  // namespace minsurf

#endif  // MINSURF_RIEMANN_DOMAIN_HPP
