// Copyright 2026 The GSP Workbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

int run_command(const std::string& args, const std::string& redirect = "") {
  std::string command = std::string(GSP_CLI_PATH) + " " + args;
  if (!redirect.empty()) {
    command += " > " + redirect + " 2>/dev/null";
  } else {
    command += " > /dev/null 2>/dev/null";
  }
  const int status = std::system(command.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("run prints an outcome") {
  CHECK(run_command("run --instance poa2 --bids 0,0.5 ", "/tmp/gsp_cli_run.json") == 0);
  const std::string out = slurp("/tmp/gsp_cli_run.json");
  CHECK(out.find("\"welfare\": 1.0") != std::string::npos);
  CHECK(out.find("\"slot_to_player\"") != std::string::npos);
  std::remove("/tmp/gsp_cli_run.json");
}

TEST_CASE("verify-ne exit codes") {
  CHECK(run_command("verify-ne --instance poa2 --bids 0,0.5") == 0);
  CHECK(run_command("verify-ne --instance poa3 --bids 0,0.5296,0.14583") == 0);
  // Not an equilibrium.
  CHECK(run_command("verify-ne --instance poa2 --bids 0,0.4") == 1);
  // Epsilon slack flips the verdict.
  CHECK(run_command("verify-ne --instance poa2 --bids 0,0.4 --eps 0.17") == 0);
  // Subset restriction.
  CHECK(run_command("verify-ne --instance poa2 --bids 0,0.4 --subset 2") == 0);
  // Overbidding is a usage error.
  CHECK(run_command("verify-ne --instance poa2 --bids 0,0.9") == 2);
}

TEST_CASE("weakfeas exit codes") {
  CHECK(run_command("weakfeas --instance poa2 --perm 2,1") == 0);
  CHECK(run_command("weakfeas --instance poa2 --perm 1,2") == 0);
}

TEST_CASE("poa-search closed form and numeric") {
  CHECK(run_command("poa-search --n 2", "/tmp/gsp_cli_poa.json") == 0);
  std::string out = slurp("/tmp/gsp_cli_poa.json");
  CHECK(out.find("\"best_ratio\": 1.25") != std::string::npos);
  CHECK(out.find("closed-form") != std::string::npos);

  CHECK(run_command("poa-search --n 2 --method numeric --budget 5000 --seed 4",
                    "/tmp/gsp_cli_poa.json") == 0);
  out = slurp("/tmp/gsp_cli_poa.json");
  CHECK(out.find("numeric-maximization") != std::string::npos);
  CHECK(run_command("poa-search --n 9") == 2);
  std::remove("/tmp/gsp_cli_poa.json");
}

TEST_CASE("learn rejects a zero horizon") {
  CHECK(run_command("learn --instance poa2 --rounds 0 --out /tmp/gsp_cli_t0.csv") == 2);
}

TEST_CASE("learn, determinism, and cce-check") {
  CHECK(run_command("learn --instance poa2 --grid 15 --rounds 2000 --seed 5 "
                    "--out /tmp/gsp_cli_a.csv") == 0);
  CHECK(run_command("learn --instance poa2 --grid 15 --rounds 2000 --seed 5 "
                    "--out /tmp/gsp_cli_b.csv") == 0);
  CHECK(slurp("/tmp/gsp_cli_a.csv") == slurp("/tmp/gsp_cli_b.csv"));
  CHECK(!slurp("/tmp/gsp_cli_a.csv").empty());

  CHECK(run_command("cce-check --instance poa2 --history /tmp/gsp_cli_a.csv "
                    "--grid 15",
                    "/tmp/gsp_cli_cce.json") == 0);
  const std::string out = slurp("/tmp/gsp_cli_cce.json");
  CHECK(out.find("per_player_epsilon") != std::string::npos);
  std::remove("/tmp/gsp_cli_a.csv");
  std::remove("/tmp/gsp_cli_b.csv");
  std::remove("/tmp/gsp_cli_cce.json");
}

TEST_CASE("learn with fixed bidders and parallel replicas") {
  CHECK(run_command("learn --instance poa3 --grid 9 --rounds 500 --seed 6 "
                    "--fixed 3:0.1 --out /tmp/gsp_cli_f.csv") == 0);
  CHECK(run_command("learn --instance poa2 --grid 9 --rounds 300 --seed 6 "
                    "--parallel 2 --out /tmp/gsp_cli_p.csv") == 0);
  CHECK(!slurp("/tmp/gsp_cli_p.csv.r0").empty());
  CHECK(!slurp("/tmp/gsp_cli_p.csv.r1").empty());
  std::remove("/tmp/gsp_cli_f.csv");
  std::remove("/tmp/gsp_cli_p.csv.r0");
  std::remove("/tmp/gsp_cli_p.csv.r1");
}

TEST_CASE("learn-bayes consumes a distribution file") {
  std::ofstream dist("/tmp/gsp_cli_dist.json");
  dist << R"({"n": 2, "alphas": [1.0, 0.5],
              "support": [
                {"prob": 0.5, "valuations": [1.0, 0.5], "gammas": [1.0, 1.0]},
                {"prob": 0.5, "valuations": [0.8, 0.4], "gammas": [1.0, 1.0]}]})";
  dist.close();
  CHECK(run_command("learn-bayes --dist /tmp/gsp_cli_dist.json --grid 9 "
                    "--rounds 400 --seed 7 --out /tmp/gsp_cli_bayes.csv") == 0);
  CHECK(!slurp("/tmp/gsp_cli_bayes.csv").empty());
  CHECK(run_command("learn-bayes --dist /tmp/missing_dist.json --rounds 10 "
                    "--out /tmp/x.csv") != 0);
  std::remove("/tmp/gsp_cli_dist.json");
  std::remove("/tmp/gsp_cli_bayes.csv");
}

TEST_CASE("verify-bounds") {
  CHECK(run_command("verify-bounds --which constants") == 0);
  CHECK(run_command("verify-bounds --which technical") == 0);
  CHECK(run_command("verify-bounds --which bayes") == 0);
  CHECK(run_command("verify-bounds --which fullinfo") == 0);
  CHECK(run_command("verify-bounds --which counterexample") == 0);
  CHECK(run_command("verify-bounds --which nonsense") == 2);
  CHECK(run_command("verify-bounds", "/tmp/gsp_cli_bounds.json") == 0);
  const std::string out = slurp("/tmp/gsp_cli_bounds.json");
  CHECK(out.find("\"pass\": true") != std::string::npos);
  std::remove("/tmp/gsp_cli_bounds.json");
}

TEST_CASE("usage errors") {
  CHECK(run_command("unknown-subcommand") == 2);
  CHECK(run_command("verify-ne --instance poa2") == 2);  // missing --bids
  CHECK(run_command("verify-ne --instance poa2 --bids 0,0.5 --bogus") == 2);
  CHECK(run_command("--help") == 0);
}
