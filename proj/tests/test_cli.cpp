// Copyright 2026 The rel-toa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "doctest.h"
#include "reltoa/config.hpp"
#include "reltoa/csv.hpp"
#include "reltoa/io.hpp"
#include "reltoa/scenarios.hpp"

using namespace reltoa;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("reltoa-test-" + name);
  fs::remove_all(dir);
  return dir;
}

std::map<std::string, std::string> manifest(const fs::path& dir) {
  std::map<std::string, std::string> m;
  std::istringstream in(slurp(dir / "manifest.txt"));
  std::string hash, name;
  while (in >> hash >> name) m[name] = hash;
  return m;
}

int run(const std::string& sub, const std::string& ini, const fs::path& dir, std::string* err = nullptr) {
  std::ostringstream log, errs;
  const int rc = app::run_subcommand(sub, config::parse_config(ini), dir, log, errs);
  if (err) *err = errs.str();
  return rc;
}

// Small but complete distribution run.
const char* small_dist =
    "[grid]\nhalf_length = 10\nnodes = 801\n"
    "[dist]\ntau_min = 1\ntau_max = 6\ntau_points = 101\np_points = 3001\n";

}  // namespace

TEST_CASE("number formatting is fixed and locale independent") {
  CHECK(csv::format(0.1) == "0.10000000000000001");
  CHECK(csv::format(-3.0) == "-3");
  CHECK(csv::format(1e-20) == "9.9999999999999995e-21");
  CHECK(csv::format(std::nan("")) == "nan");
}

TEST_CASE("SHA-256 test vectors") {
  CHECK(io::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(io::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("dist run writes the distributions, a plot script and a matching manifest") {
  const auto dir = fresh_dir("dist");
  REQUIRE(run("dist", small_dist, dir) == app::exit_ok);
  for (const char* f : {"toadist_coarse.csv", "toadist_analytic.csv", "dist_summary.csv", "plot.gp", "config.ini",
                        "manifest.txt"}) {
    CAPTURE(f);
    CHECK(fs::exists(dir / f));
  }
  const auto m = manifest(dir);
  CHECK(m.size() == 5);
  for (const auto& [name, hash] : m) CHECK(io::sha256_hex(slurp(dir / name)) == hash);
  CHECK(slurp(dir / "plot.gp").find("toadist_coarse.csv") != std::string::npos);
  CHECK(slurp(dir / "config.ini").find("nodes = 801") != std::string::npos);

  SUBCASE("identical configuration gives byte-identical outputs") {
    const auto again = fresh_dir("dist-again");
    REQUIRE(run("dist", small_dist, again) == app::exit_ok);
    CHECK(manifest(again) == m);
  }
}

TEST_CASE("failures map to exit codes and leave no partial output") {
  std::string err;
  const auto dir = fresh_dir("fail");
  // The packet leaks out of a box of half length 2: rejected after solving.
  const std::string ini = std::string("[grid]\nhalf_length = 2\nnodes = 101\n") +
                          "[dist]\ntau_min = 1\ntau_max = 6\ntau_points = 101\np_points = 3001\n";
  CHECK(run("dist", ini, dir, &err) == app::exit_validation);
  CHECK_FALSE(err.empty());
  CHECK((!fs::exists(dir) || fs::is_empty(dir)));

  CHECK(run("nonsense", "", fresh_dir("nonsense"), &err) == app::exit_validation);
  CHECK(err.find("unknown subcommand") != std::string::npos);

  // A PV truncation too short for its tolerance is a convergence failure.
  const auto conv = fresh_dir("conv");
  CHECK(run("kernel", "[kernel]\npv_p_max = 50\npv_tolerance = 1e-12\n", conv) == app::exit_convergence);
  CHECK((!fs::exists(conv) || fs::is_empty(conv)));
}

TEST_CASE("expectation and qfactor runs") {
  const auto dir = fresh_dir("expect");
  REQUIRE(run("expectation", "[expectation]\np_values = 3, 5\n", dir) == app::exit_ok);
  const std::string table = slurp(dir / "expectation.csv");
  CHECK(table.find("p,sigma,t_classical,qc,tau_borel,tau_exact") != std::string::npos);
  const auto q = fresh_dir("qfactor");
  REQUIRE(run("qfactor", "[expectation]\np_values = 2\nsigma_values = 0.5, 1\nn_max = 20\n", q) == app::exit_ok);
  CHECK(fs::exists(q / "qfactor.csv"));
  CHECK(fs::exists(q / "qc_series.csv"));
}

TEST_CASE("translate and evolve runs") {
  const auto t = fresh_dir("translate");
  REQUIRE(run("translate", "[wavepacket]\np0 = 2\n[dist]\ntau_min = 0\ntau_max = 8\ntau_points = 201\nt_shift = 1\n", t) ==
          app::exit_ok);
  CHECK(fs::exists(t / "toadist_translated_1.csv"));
  CHECK(fs::exists(t / "translate_summary.csv"));

  const auto e = fresh_dir("evolve");
  REQUIRE(run("evolve",
              "[evolve]\nsource = analytic\ntau = 1\nt_points = 21\nq_points = 151\np_max = 100\np_points = 2001\n", e) ==
          app::exit_ok);
  CHECK(fs::exists(e / "snapshots_nonnodal.csv"));
  CHECK(fs::exists(e / "snapshots_nodal.csv"));
  CHECK(slurp(e / "arrival.csv").find("nonnodal,1,") != std::string::npos);
}

TEST_CASE("spectrum run") {
  const auto dir = fresh_dir("spectrum");
  REQUIRE(run("spectrum", "[grid]\nnodes = 61\n[evolve]\ninterp_points = 101\n", dir) == app::exit_ok);
  for (const char* f : {"spectrum_modes.csv", "spectrum_vectors.csv", "eigenfunctions_interp.csv"}) {
    CHECK(fs::exists(dir / f));
  }
}
