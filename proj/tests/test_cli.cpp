// End-to-end CLI tests: exit codes, JSON output, determinism, file side
// effects.  The binary path is injected by the build system.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#ifndef MINSURF_CLI_PATH
#error "MINSURF_CLI_PATH must be defined by the build"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + std::string(MINSURF_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  RunResult r;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_CASE("catalog: exit 0, valid deterministic JSON") {
  const RunResult a = run_cli("catalog");
  CHECK(a.exit_code == 0);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j.at("schema_version") == "minsurf-report/1");
  CHECK(j.at("entries").size() >= 10);
  const RunResult b = run_cli("catalog");
  CHECK(a.out == b.out);  // byte-identical across runs
}

TEST_CASE("solve: --alpha and --x agree; alpha = pi/4 gives m = 0") {
  const RunResult a = run_cli("solve --k 2 --alpha 0.7853981633974483");
  REQUIRE(a.exit_code == 0);
  const auto ja = nlohmann::json::parse(a.out);
  CHECK(std::fabs(ja.at("m").get<double>()) < 1e-8);
  const RunResult b = run_cli("solve --k 3 --x 0.6");
  REQUIRE(b.exit_code == 0);
  const auto jb = nlohmann::json::parse(b.out);
  char abuf[40];
  std::snprintf(abuf, sizeof abuf, "%.17g", std::atan(1.0 / 0.6));
  const RunResult c = run_cli(std::string("solve --k 3 --alpha ") + abuf);
  const auto jc = nlohmann::json::parse(c.out);
  CHECK(std::fabs(jb.at("rho").get<double>() - jc.at("rho").get<double>()) < 1e-9);
}

TEST_CASE("solve rejects conflicting or missing parameterizations") {
  CHECK(run_cli("solve --k 2 --alpha 1.0 --x 0.5").exit_code == 1);
  CHECK(run_cli("solve --k 2").exit_code == 1);
}

TEST_CASE("diag: well-posed surface exits 0, broken surface exits 2 with an error report") {
  const RunResult ok = run_cli("diag --surface catenoid");
  CHECK(ok.exit_code == 0);
  const auto j = nlohmann::json::parse(ok.out);
  CHECK(j.at("balance").at("max_period_norm").get<double>() < 1e-7);

  const RunResult bad = run_cli("diag --surface neg_lopezros_attempt --r 1.0");
  CHECK(bad.exit_code == 2);
  const auto je = nlohmann::json::parse(bad.out);
  CHECK(je.at("report") == "error");
  CHECK(je.at("code") == "NonzeroPeriod");
  CHECK(je.at("expected_failure") == true);
}

TEST_CASE("gen: writes mesh and sidecar into the env-configured directory") {
  const std::string dir = "/tmp/minsurf_cli_gen_test";
  (void)!std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str());
  const RunResult r = run_cli("gen --surface catenoid --res 16 --out cat.obj",
                              "MINSURF_OUT_DIR=" + dir);
  REQUIRE(r.exit_code == 0);
  std::ifstream mesh(dir + "/cat.obj");
  CHECK(mesh.good());
  std::ifstream side(dir + "/cat.obj.json");
  REQUIRE(side.good());
  std::stringstream ss;
  ss << side.rdbuf();
  const auto j = nlohmann::json::parse(ss.str());
  CHECK(j.at("report") == "mesh");
  CHECK(j.at("self_intersection").at("clean") == true);
  // stdout carries the same report
  CHECK(nlohmann::json::parse(r.out).at("mesh").at("vertices") ==
        j.at("mesh").at("vertices"));
  (void)!std::system(("rm -rf " + dir).c_str());
}

TEST_CASE("gen: non-period-free data exits 2 unless --allow-multivalued") {
  const RunResult r = run_cli("gen --surface helicoid --res 12 --out /tmp/h.obj");
  CHECK(r.exit_code == 2);
  CHECK(nlohmann::json::parse(r.out).at("code") == "NonzeroPeriod");
  const RunResult ok =
      run_cli("gen --surface helicoid --res 12 --allow-multivalued --out /tmp/h.obj");
  CHECK(ok.exit_code == 0);
  std::remove("/tmp/h.obj");
  std::remove("/tmp/h.obj.json");
}

TEST_CASE("index: spectral report with the branch-value certificate") {
  const RunResult r = run_cli("index --surface catenoid --res 16 --refinements 1");
  REQUIRE(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("index") == 1);
  CHECK(j.at("stable") == true);
  CHECK(j.at("great_circle_branch_values") == true);
}

TEST_CASE("unknown flags, bad tolerances, and unknown surfaces exit 1") {
  CHECK(run_cli("gen --surface catenoid --out x.obj --frobnicate 3").exit_code == 1);
  CHECK(run_cli("gen --surface catenoid --out x.obj --quad-tol -1").exit_code == 1);
  CHECK(run_cli("diag --surface gyroid").exit_code == 1);
  CHECK(run_cli("frobnicate").exit_code == 1);
}
