// minsurf command-line front end.
//
//   minsurf catalog                     list the surface catalog
//   minsurf solve --k 2 --alpha 1.0    solve the deformation-family period problem
//   minsurf gen   --surface catenoid --res 64 --out c.obj
//   minsurf diag  --surface mkx --k 2 --alpha 1.0
//   minsurf index --surface n_noid --n 3
//
// Every command prints one JSON report on stdout.  Exit codes: 0 success,
// 2 for expected-failure diagnostics (nonzero period on a deliberately broken
// surface, uncertified spectral index), 1 for any other error.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "minsurf/report.hpp"

namespace {

using namespace minsurf;

// parameter flags shared by gen/diag/index; only flags the user actually set
// are forwarded, so catalog defaults apply otherwise
struct ParamFlags {
  std::map<std::string, double> values;

  void attach(CLI::App* cmd) {
    static const char* names[] = {"n", "k", "alpha", "x", "r", "theta", "lambda", "a", "rho"};
    for (const char* n : names) {
      auto cb = [this, n](double v) { values[n] = v; };
      cmd->add_option_function<double>(std::string("--") + n, cb,
                                       std::string("surface parameter ") + n);
    }
  }
};

std::string out_dir_prefix() {
  const char* dir = std::getenv("MINSURF_OUT_DIR");
  if (!dir || !*dir) return "";
  std::string s = dir;
  if (!s.empty() && s.back() != '/') s += '/';
  return s;
}

void emit(const ordered_json& j) { std::cout << report_dump(j); }

int run(int argc, char** argv) {
  CLI::App app{"complete minimal surfaces of finite total curvature: "
               "period solving, meshing, diagnostics, stability index"};
  app.require_subcommand(1);

  // ---- catalog
  CLI::App* c_cat = app.add_subcommand("catalog", "list catalog entries");

  // ---- solve
  CLI::App* c_solve = app.add_subcommand("solve", "solve the k-family period problem");
  int solve_k = 2;
  double solve_alpha = NAN, solve_x = NAN;
  c_solve->add_option("--k", solve_k, "symmetry order k >= 2")->required();
  CLI::Option* o_alpha = c_solve->add_option("--alpha", solve_alpha, "angle parameter in [pi/4, pi/2)");
  CLI::Option* o_x = c_solve->add_option("--x", solve_x, "x = cot(alpha) in (0, 1]");
  o_alpha->excludes(o_x);

  // ---- gen
  CLI::App* c_gen = app.add_subcommand("gen", "tessellate a surface and write mesh + report");
  std::string gen_surface, gen_out;
  int gen_res = 64;
  double gen_eps = 1.0 / 64, gen_R = 64.0, gen_quad_tol = 1e-10, gen_period_tol = 1e-7;
  bool gen_multivalued = false;
  ParamFlags gen_params;
  c_gen->add_option("--surface", gen_surface, "catalog entry name")->required();
  gen_params.attach(c_gen);
  c_gen->add_option("--res", gen_res, "grid resolution")->check(CLI::PositiveNumber);
  c_gen->add_option("--eps", gen_eps, "chart truncation at finite punctures")->check(CLI::PositiveNumber);
  c_gen->add_option("--R", gen_R, "chart truncation radius at infinity")->check(CLI::PositiveNumber);
  c_gen->add_option("--quad-tol", gen_quad_tol, "quadrature tolerance")->check(CLI::PositiveNumber);
  c_gen->add_option("--period-tol", gen_period_tol, "period-free gate tolerance")->check(CLI::PositiveNumber);
  c_gen->add_flag("--allow-multivalued", gen_multivalued,
                  "mesh non-period-free data on a cut domain");
  c_gen->add_option("--out", gen_out, "output mesh path (.obj or .ply)")->required();

  // ---- diag
  CLI::App* c_diag = app.add_subcommand("diag", "period/flux/torque diagnostics");
  std::string diag_surface;
  double diag_quad_tol = 1e-10;
  ParamFlags diag_params;
  c_diag->add_option("--surface", diag_surface, "catalog entry name")->required();
  diag_params.attach(c_diag);
  c_diag->add_option("--quad-tol", diag_quad_tol, "quadrature tolerance")->check(CLI::PositiveNumber);

  // ---- index
  CLI::App* c_index = app.add_subcommand("index", "stability index of the Gauss map");
  std::string index_surface;
  int index_res = 24, index_refine = 2;
  ParamFlags index_params;
  c_index->add_option("--surface", index_surface, "catalog entry name")->required();
  index_params.attach(c_index);
  c_index->add_option("--res", index_res, "base sphere-mesh resolution")->check(CLI::PositiveNumber);
  c_index->add_option("--refinements", index_refine, "number of mesh refinements")
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);  // prints help or the usage error
    return rc == 0 ? 0 : 1;
  }

  if (c_cat->parsed()) {
    emit(catalog_json());
    return 0;
  }

  if (c_solve->parsed()) {
    double alpha;
    if (o_alpha->count()) alpha = solve_alpha;
    else if (o_x->count()) alpha = std::atan(1.0 / solve_x);
    else throw error(errc::bad_config, "solve: provide --alpha or --x");
    emit(to_json(solve_family(solve_k, alpha)));
    return 0;
  }

  if (c_gen->parsed()) {
    WeierstrassBundle b = make_surface(gen_surface, gen_params.values);
    MeshOptions opt;
    opt.resolution = gen_res;
    opt.eps = gen_eps;
    opt.R = gen_R;
    opt.quad_tol = gen_quad_tol;
    opt.period_tol = gen_period_tol;
    opt.allow_multivalued = gen_multivalued;
    TriMesh m = tessellate(b, opt);
    const std::string path = out_dir_prefix() + gen_out;
    const bool ply = path.size() > 4 && path.substr(path.size() - 4) == ".ply";
    export_mesh(m, ply ? "ply" : "obj", path);
    double curv;
    try {
      curv = total_curvature(b);  // chart quadrature of the Gauss pullback
    } catch (const error&) {
      curv = total_curvature(m);  // fall back to the discrete mesh estimate
    }
    PeriodReport periods = build_period_report(b, 1e-9, /*with_axes=*/!gen_multivalued);
    IntersectionReport hits = self_intersection(m);
    ordered_json j = mesh_sidecar_json(b, m, periods, curv, hits);
    j["mesh_path"] = path;
    std::ofstream side(path + ".json");
    if (!side) throw error(errc::io_error, "cannot open " + path + ".json");
    side << report_dump(j);
    emit(j);
    return 0;
  }

  if (c_diag->parsed()) {
    WeierstrassBundle b = make_surface(diag_surface, diag_params.values);
    PeriodReport rep = build_period_report(b, diag_quad_tol);
    // a deliberately broken catalog entry reports its nonzero period here
    for (const CatalogEntry& e : list_catalog())
      if (e.name == diag_surface && !e.well_posed && rep.max_period_norm > 1e-7)
        throw error(errc::nonzero_period,
                    "diag: nonzero period " + std::to_string(rep.max_period_norm));
    emit(to_json(rep));
    return 0;
  }

  if (c_index->parsed()) {
    WeierstrassBundle b = make_surface(index_surface, index_params.values);
    SpectralReport rep = index_estimate(b, index_res, index_refine);
    ordered_json j = to_json(rep);
    try {
      const bool gc = great_circle_branch_check(b);
      j["great_circle_branch_values"] = gc;
      j["expected_if_great_circle"] = gc ? 2 * b.gauss_degree - 1 : -1;
    } catch (const error&) {
      j["great_circle_branch_values"] = nullptr;
    }
    emit(j);
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const minsurf::error& e) {
    emit(minsurf::error_json(e));
    return e.expected_failure() ? 2 : 1;
  } catch (const std::exception& e) {
    minsurf::ordered_json j = minsurf::report_envelope("error");
    j["code"] = "Unhandled";
    j["message"] = e.what();
    j["expected_failure"] = false;
    emit(j);
    return 1;
  }
}
