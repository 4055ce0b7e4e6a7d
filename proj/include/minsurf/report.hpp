// report.hpp -- PeriodReport assembly and the machine-readable JSON report
// schema shared by the CLI commands and the test suite.
//
// Determinism contract: identical inputs produce byte-identical JSON.  Field
// order is fixed (nlohmann::ordered_json preserves insertion order) and every
// floating-point value is rounded to 12 significant digits before it enters a
// report, so the emitted digits do not depend on excess binary precision.
#ifndef MINSURF_REPORT_HPP
#define MINSURF_REPORT_HPP

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "json.hpp"

#include "catalog.hpp"
#include "period.hpp"
#include "spectral.hpp"
#include "tessellate.hpp"
#include "weierstrass.hpp"

namespace minsurf {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kReportSchemaVersion = "minsurf-report/1";
// All lengths are in the model scale fixed by the catalog's dh normalization
// (unit constant in dh); reports carry this note rather than physical units.
inline constexpr const char* kUnitsNote = "model scale, dh normalization c=1";

// round to 12 significant digits so serialized numbers are stable
inline double sig12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

inline ordered_json jnum(double v) { return sig12(v); }
inline ordered_json jnum(cplx v) {
  return ordered_json{{"re", sig12(v.real())}, {"im", sig12(v.imag())}};
}
inline ordered_json jnum(const vec3& v) {
  return ordered_json::array({sig12(v.x), sig12(v.y), sig12(v.z)});
}
inline ordered_json jnum(const cvec3& v) {
  return ordered_json{{"re", jnum(v.real())}, {"im", jnum(v.imag())}};
}

inline ordered_json report_envelope(const std::string& kind) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["report"] = kind;
  j["units"] = kUnitsNote;
  return j;
}

// ---------------------------------------------------------------------------
// PeriodReport

struct CycleReport {
  std::string label;       // "gamma1", "gamma2", "end:<puncture>"
  int chart_winding = 1;
  cvec3 full{};            // complex contour integral of Phi
  vec3 period{};           // Re of full
  vec3 flux{};             // Im of full
};

struct PunctureReport {
  std::string id;
  cplx residue_dh{};
  double growth = 0;       // -Re residue
  cplx residue_phi1{};
  cplx residue_phi2{};
  bool axis_defined = false;
  vec3 torque0{};          // about the common-frame origin (catenoid ends)
  vec3 axis_W{};           // horizontal axis offset   (catenoid ends)
};

struct PeriodReport {
  std::string name;
  std::vector<CycleReport> cycles;
  std::vector<PunctureReport> punctures;
  double residue_sum_abs = 0;  // |sum residues of dh| over punctures
  double growth_sum_abs = 0;   // |sum growth rates|
  double max_period_norm = 0;  // largest |Re contour integral| over the basis
};

inline PeriodReport build_period_report(const WeierstrassBundle& b, double quad_tol = 1e-10,
                                        bool with_axes = true) {
  PeriodReport rep;
  rep.name = b.name;
  for (const Cycle& c : b.basis) {
    CycleReport cr;
    cr.label = c.label == cycle_label::gamma1   ? "gamma1"
               : c.label == cycle_label::gamma2 ? "gamma2"
                                                : "end:" + c.puncture;
    cr.chart_winding = c.chart_winding;
    cr.full = integrate_phi(b, c.path, quad_tol);
    cr.period = cr.full.real();
    cr.flux = cr.full.imag();
    rep.max_period_norm = std::max(rep.max_period_norm, cr.period.norm_inf());
    rep.cycles.push_back(std::move(cr));
  }
  cplx res_sum = 0;
  double growth_sum = 0;
  for (const PunctureInfo& p : b.punctures) {
    PunctureReport pr;
    pr.id = p.id;
    pr.residue_dh = dh_residue(b, p);
    pr.growth = -pr.residue_dh.real();
    res_sum += pr.residue_dh;
    growth_sum += pr.growth;
    // residues of phi_1, phi_2 from the matching basis end loop
    for (size_t i = 0; i < b.basis.size(); ++i) {
      if (b.basis[i].label != cycle_label::end_loop || b.basis[i].puncture != p.id) continue;
      const cvec3& full = rep.cycles[i].full;
      pr.residue_phi1 = full.x / cplx(0, 2 * kPi);
      pr.residue_phi2 = full.y / cplx(0, 2 * kPi);
    }
    rep.punctures.push_back(std::move(pr));
  }
  rep.residue_sum_abs = std::abs(res_sum);
  rep.growth_sum_abs = std::fabs(growth_sum);
  if (with_axes) {
    try {
      for (const EndAxis& ea : balanced_end_axes(b)) {
        for (PunctureReport& pr : rep.punctures)
          if (pr.id == ea.puncture) {
            pr.axis_defined = true;
            pr.torque0 = ea.torque0;
            pr.axis_W = ea.W;
          }
      }
    } catch (const error&) {
      // axis diagnostics are best-effort; the core report stays valid
    }
  }
  return rep;
}

inline ordered_json to_json(const PeriodReport& r) {
  ordered_json j = report_envelope("period");
  j["surface"] = r.name;
  ordered_json cycles = ordered_json::array();
  for (const CycleReport& c : r.cycles) {
    ordered_json cj;
    cj["label"] = c.label;
    cj["chart_winding"] = c.chart_winding;
    cj["integral"] = jnum(c.full);
    cj["period"] = jnum(c.period);
    cj["flux"] = jnum(c.flux);
    cycles.push_back(std::move(cj));
  }
  j["cycles"] = std::move(cycles);
  ordered_json punct = ordered_json::array();
  for (const PunctureReport& p : r.punctures) {
    ordered_json pj;
    pj["id"] = p.id;
    pj["residue_dh"] = jnum(p.residue_dh);
    pj["growth"] = jnum(p.growth);
    pj["residue_phi1"] = jnum(p.residue_phi1);
    pj["residue_phi2"] = jnum(p.residue_phi2);
    if (p.axis_defined) {
      pj["torque"] = jnum(p.torque0);
      pj["axis_W"] = jnum(vec3{p.axis_W.x, p.axis_W.y, 0});
    } else {
      pj["torque"] = nullptr;
      pj["axis_W"] = nullptr;
    }
    punct.push_back(std::move(pj));
  }
  j["punctures"] = std::move(punct);
  ordered_json bal;
  bal["residue_sum_abs"] = jnum(r.residue_sum_abs);
  bal["growth_sum_abs"] = jnum(r.growth_sum_abs);
  bal["max_period_norm"] = jnum(r.max_period_norm);
  j["balance"] = std::move(bal);
  return j;
}

// ---------------------------------------------------------------------------
// FamilySolution

inline ordered_json to_json(const FamilySolution& s) {
  ordered_json j = report_envelope("family_solution");
  j["k"] = s.k;
  j["alpha"] = jnum(s.alpha);
  j["x"] = jnum(s.x);
  j["m"] = jnum(s.m);
  j["rho"] = jnum(s.rho);
  j["M"] = jnum(s.M);
  j["E_plus"] = jnum(s.E_plus_a);
  j["E_minus"] = jnum(s.E_minus_a);
  j["E_plus_tilde"] = jnum(s.E_plus_t);
  j["E_minus_tilde"] = jnum(s.E_minus_t);
  j["C1"] = jnum(s.C1);
  j["C2"] = jnum(s.C2);
  j["Q1"] = jnum(s.Q1);
  j["Q2"] = jnum(s.Q2);
  j["growth_bottom"] = jnum(s.growth_bottom);
  j["growth_middle"] = jnum(s.growth_middle);
  j["growth_top"] = jnum(s.growth_top);
  j["flat_middle"] = s.flat_middle;
  j["growth_condition_ok"] = s.growth_condition_ok;
  j["compatibility_residual"] = jnum(s.compatibility_residual);
  return j;
}

// ---------------------------------------------------------------------------
// SpectralReport

inline ordered_json to_json(const SpectralReport& r) {
  ordered_json j = report_envelope("spectral");
  j["index"] = r.index;
  ordered_json ev = ordered_json::array();
  for (double e : r.eigenvalues_below_threshold) ev.push_back(jnum(e));
  j["eigenvalues_below_threshold"] = std::move(ev);
  j["margin"] = jnum(r.margin);
  j["guard"] = jnum(r.guard);
  j["refinement_levels"] = r.refinement_levels;
  j["stable"] = r.stable;
  j["index_per_level"] = r.index_per_level;
  j["gauss_degree"] = r.gauss_degree;
  j["mass_total"] = jnum(r.mass_total);
  j["mass_expected"] = jnum(4 * kPi * r.gauss_degree);
  return j;
}

// ---------------------------------------------------------------------------
// catalog

inline ordered_json to_json(const ExpectedRecord& e) {
  ordered_json j;
  j["total_curvature"] = jnum(e.total_curvature);
  j["genus"] = e.genus;
  j["ends"] = e.ends;
  j["degree"] = e.degree;
  j["embedded"] = e.embedded;
  j["index"] = e.index;
  return j;
}

inline ExpectedRecord expected_record_from_json(const ordered_json& j) {
  ExpectedRecord e;
  e.total_curvature = j.at("total_curvature").get<double>();
  e.genus = j.at("genus").get<int>();
  e.ends = j.at("ends").get<int>();
  e.degree = j.at("degree").get<int>();
  e.embedded = j.at("embedded").get<bool>();
  e.index = j.at("index").get<int>();
  return e;
}

inline ordered_json catalog_json() {
  ordered_json j = report_envelope("catalog");
  ordered_json entries = ordered_json::array();
  for (const CatalogEntry& e : list_catalog()) {
    ordered_json ej;
    ej["name"] = e.name;
    ej["params"] = e.param_names;
    ordered_json defs = ordered_json::object();
    for (const auto& [k, v] : e.default_params) defs[k] = jnum(v);
    ej["defaults"] = std::move(defs);
    ej["well_posed"] = e.well_posed;
    ej["expected"] = to_json(e.expected);
    entries.push_back(std::move(ej));
  }
  j["entries"] = std::move(entries);
  return j;
}

// ---------------------------------------------------------------------------
// mesh sidecar (gen command)

inline ordered_json mesh_sidecar_json(const WeierstrassBundle& b, const TriMesh& m,
                                      const PeriodReport& periods, double total_curv,
                                      const IntersectionReport& hits) {
  ordered_json j = report_envelope("mesh");
  j["surface"] = b.name;
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : b.params) params[k] = jnum(v);
  j["params"] = std::move(params);
  ordered_json mesh;
  mesh["vertices"] = m.vertices.size();
  mesh["triangles"] = m.triangles.size();
  mesh["euler_characteristic"] = euler_characteristic(m);
  mesh["trunc_eps"] = jnum(m.trunc_eps);
  mesh["trunc_R"] = jnum(m.trunc_R);
  mesh["symmetry_copies"] = m.symmetry_copies;
  j["mesh"] = std::move(mesh);
  j["total_curvature"] = jnum(total_curv);
  ordered_json si;
  si["tested_pairs"] = hits.tested_pairs;
  si["intersecting_pairs"] = hits.count;
  si["clean"] = hits.count == 0;
  si["note"] = "heuristic evidence at the stated truncation, not a certificate";
  j["self_intersection"] = std::move(si);
  j["periods"] = to_json(periods);
  return j;
}

// ---------------------------------------------------------------------------
// errors

inline ordered_json error_json(const error& e) {
  ordered_json j = report_envelope("error");
  j["code"] = errc_name(e.code());
  j["message"] = e.what();
  j["expected_failure"] = e.expected_failure();
  return j;
}

// fixed dump format: 2-space indent, '\n' line ends, trailing newline
inline std::string report_dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace minsurf

#endif  // MINSURF_REPORT_HPP
