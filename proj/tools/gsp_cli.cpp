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

// Command-line front end. Exit codes: 0 = pass / success, 1 = verification
// failed, 2 = usage or input error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gsp/auction.hpp"
#include "gsp/bounds.hpp"
#include "gsp/equilibria.hpp"
#include "gsp/instance.hpp"
#include "gsp/io.hpp"
#include "gsp/learning.hpp"
#include "gsp/poa.hpp"
#include "gsp/types.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using nlohmann::json;

gsp::Vector parse_doubles(const std::string& text) {
  std::vector<double> values;
  std::istringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    values.push_back(std::stod(token));
  }
  if (values.empty()) throw std::invalid_argument("expected a comma-separated list");
  return Eigen::Map<gsp::Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

// 1-based on the command line, 0-based internally.
std::vector<int> parse_players(const std::string& text) {
  std::vector<int> players;
  std::istringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    players.push_back(std::stoi(token) - 1);
  }
  return players;
}

std::map<int, double> parse_fixed(const std::string& text) {
  std::map<int, double> fixed;
  std::istringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    const auto colon = token.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("--fixed expects entries of the form player:bid");
    }
    fixed[std::stoi(token.substr(0, colon)) - 1] = std::stod(token.substr(colon + 1));
  }
  return fixed;
}

json vector_json(const gsp::Vector& v) {
  json arr = json::array();
  for (int k = 0; k < v.size(); ++k) arr.push_back(v[k]);
  return arr;
}

json permutation_json(const gsp::Permutation& perm) {
  json arr = json::array();
  for (int p : perm) arr.push_back(p + 1);
  return arr;
}

json outcome_json(const gsp::Outcome& outcome) {
  json doc;
  doc["slot_to_player"] = permutation_json(outcome.slot_to_player);
  doc["player_to_slot"] = permutation_json(outcome.player_to_slot);
  doc["payments"] = vector_json(outcome.payments);
  doc["utilities"] = vector_json(outcome.utilities);
  doc["welfare"] = outcome.welfare;
  return doc;
}

json report_json(const gsp::EquilibriumReport& report) {
  json doc;
  doc["per_player_regret"] = vector_json(report.per_player_regret);
  doc["max_regret"] = report.max_regret;
  doc["is_equilibrium"] = report.is_equilibrium;
  doc["tolerance"] = report.tolerance;
  json witnesses = json::array();
  for (std::size_t k = 0; k < report.players_checked.size(); ++k) {
    json w;
    w["player"] = report.players_checked[k] + 1;
    w["best_utility"] = report.witnesses[k].utility;
    w["target_slot"] = report.witnesses[k].target_slot + 1;
    w["witness_bid"] = report.witnesses[k].bid;
    witnesses.push_back(w);
  }
  doc["witness_deviations"] = witnesses;
  return doc;
}

json search_json(const gsp::SearchResult& result) {
  json doc;
  doc["best_ratio"] = result.best_ratio;
  doc["method"] = result.method;
  doc["iterations"] = result.iterations;
  doc["witness"]["alphas"] = vector_json(result.witness.alphas);
  doc["witness"]["valuations"] = vector_json(result.witness.valuations);
  doc["witness"]["gammas"] = vector_json(result.witness.gammas);
  doc["witness_allocation"] = permutation_json(result.witness_allocation);
  if (result.equilibrium_bids) {
    doc["equilibrium_bids"] = vector_json(result.equilibrium_bids->bids);
  }
  doc["bound_violated"] = result.bound_violated;
  doc["budget_exhausted"] = result.budget_exhausted;
  for (const auto& [key, value] : result.diagnostics) {
    doc["diagnostics"][key] = value;
  }
  return doc;
}

json certificate_json(const gsp::CertificateReport& report) {
  json doc;
  doc["title"] = report.title;
  doc["grid_size"] = report.grid_size;
  doc["pass"] = report.pass();
  json checks = json::array();
  for (const auto& entry : report.checks) {
    json c;
    c["name"] = entry.name;
    c["worst_margin"] = entry.worst_margin;
    c["worst_at"] = entry.worst_at;
    c["tolerance"] = entry.tolerance;
    c["pass"] = entry.pass;
    checks.push_back(c);
  }
  doc["checks"] = checks;
  return doc;
}

json history_summary_json(const gsp::PlayHistory& history) {
  json doc;
  doc["rounds"] = history.rounds.size();
  doc["total_sw"] = history.total_welfare;
  doc["total_opt"] = history.total_opt;
  doc["total_opt_restricted"] = history.total_opt_restricted;
  doc["pota"] = gsp::pota_estimate(history);
  doc["max_average_regret"] = history.max_average_regret();
  doc["max_average_type_regret"] = history.max_average_type_regret();
  json per_player = json::array();
  for (int i = 0; i < history.n; ++i) {
    json p;
    p["player"] = i + 1;
    const auto& curve = history.regret_curves[i];
    p["final_regret"] = curve.size() > 0 ? curve[curve.size() - 1] : 0.0;
    json types = json::array();
    for (const auto& record : history.types[i]) {
      json tr;
      tr["type_value"] = record.type_value;
      tr["updates"] = record.updates;
      tr["cumulative_regret"] = record.cumulative_regret;
      types.push_back(tr);
    }
    p["types"] = types;
    per_player.push_back(p);
  }
  doc["players"] = per_player;
  return doc;
}

// Manifest: command, parameters, seed, version, wall clock, result digest.
// Replaying the recorded command reproduces the numeric output; the wall
// clock is informational only.
json manifest_json(const std::string& command, const json& params, double wall_ms,
                   const json& summary) {
  json doc;
  doc["command"] = command;
  doc["parameters"] = params;
  doc["version"] = kVersion;
  doc["wall_clock_ms"] = wall_ms;
  doc["result"] = summary;
  return doc;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                     start)
        .count();
  }
};

void emit(const json& doc) { std::cout << doc.dump(2) << "\n"; }

int run_learn(const std::string& instance_arg, const std::string& dist_arg,
              gsp::LearnerConfig config, const std::map<int, double>& fixed,
              const std::string& out_path, std::int64_t every, int parallel,
              const json& params) {
  Timer timer;
  gsp::validate_config(config);
  if (parallel < 1) throw std::invalid_argument("--parallel must be at least 1");
  const bool bayes = !dist_arg.empty();
  std::optional<gsp::JointDistribution> dist;
  std::optional<gsp::AuctionInstance> instance;
  if (bayes) {
    dist = gsp::load_distribution(dist_arg);
  } else {
    instance = gsp::resolve_instance(instance_arg);
  }

  // Replicas are independent runs with shifted seeds; fan them out.
  std::vector<gsp::PlayHistory> histories(parallel);
  {
    std::vector<std::thread> threads;
    for (int r = 0; r < parallel; ++r) {
      threads.emplace_back([&, r] {
        gsp::LearnerConfig replica_config = config;
        if (parallel > 1) replica_config.seed = config.seed + static_cast<unsigned>(r);
        histories[r] =
            bayes ? gsp::run_no_regret_bayes(*dist, replica_config)
                  : (fixed.empty() ? gsp::run_no_regret(*instance, replica_config)
                                   : gsp::run_with_irrational(*instance, replica_config,
                                                              fixed));
      });
    }
    for (auto& thread : threads) thread.join();
  }

  json replicas = json::array();
  for (int r = 0; r < parallel; ++r) {
    std::string path = out_path;
    if (parallel > 1) path += ".r" + std::to_string(r);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    gsp::write_trajectory_csv(histories[r], out, every);
    json summary = history_summary_json(histories[r]);
    summary["trajectory"] = path;
    summary["seed"] = parallel > 1 ? config.seed + static_cast<unsigned>(r) : config.seed;
    replicas.push_back(summary);
  }
  const json summary = parallel == 1 ? replicas[0] : json{{"replicas", replicas}};
  emit(manifest_json(bayes ? "learn-bayes" : "learn", params, timer.ms(), summary));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized second price auction workbench"};
  app.require_subcommand(1);

  std::string instance_arg;
  std::string bids_arg;
  std::string perm_arg;
  std::string subset_arg;
  std::string dist_arg;
  std::string fixed_arg;
  std::string out_arg = "trajectory.csv";
  std::string history_arg;
  std::string which = "all";
  double eps = -1.0;
  double tolerance = gsp::kDefaultTolerance;
  int grid = 51;
  std::int64_t rounds = 100000;
  std::int64_t budget = 1000000;
  std::int64_t every = 1;
  std::uint64_t seed = 1;
  int n = 2;
  int parallel = 1;
  double fixed_eta = 0.0;
  std::string method = "auto";

  auto* run_cmd = app.add_subcommand("run", "Run one auction and print the outcome");
  run_cmd->add_option("--instance", instance_arg, "Instance file or poa2/poa3")
      ->required();
  run_cmd->add_option("--bids", bids_arg, "Comma-separated bids")->required();

  auto* verify_cmd =
      app.add_subcommand("verify-ne", "Check a bid profile for equilibrium");
  verify_cmd->add_option("--instance", instance_arg)->required();
  verify_cmd->add_option("--bids", bids_arg)->required();
  verify_cmd->add_option("--eps", eps, "Multiplicative slack in [0,1)");
  verify_cmd->add_option("--subset", subset_arg, "1-based players to check");
  verify_cmd->add_option("--tol", tolerance, "Regret tolerance");

  auto* weakfeas_cmd =
      app.add_subcommand("weakfeas", "Check an allocation for weak feasibility");
  weakfeas_cmd->add_option("--instance", instance_arg)->required();
  weakfeas_cmd->add_option("--perm", perm_arg, "1-based slot-to-player list")
      ->required();

  auto* poa_cmd = app.add_subcommand("poa-search", "Worst-case inefficiency search");
  poa_cmd->add_option("--n", n, "Number of players")->required();
  poa_cmd->add_option("--perm", perm_arg, "Fix the allocation (1-based)");
  poa_cmd->add_option("--budget", budget, "Objective evaluation budget");
  poa_cmd->add_option("--seed", seed);
  poa_cmd->add_option("--method", method, "auto | closed-form | numeric");
  poa_cmd->add_option("--parallel", parallel, "Independent replicas, merged by max");

  auto* learn_cmd = app.add_subcommand("learn", "No-regret dynamics, fixed instance");
  learn_cmd->add_option("--instance", instance_arg)->required();
  learn_cmd->add_option("--grid", grid, "Bids per player grid");
  learn_cmd->add_option("--rounds", rounds, "Horizon T");
  learn_cmd->add_option("--seed", seed);
  learn_cmd->add_option("--fixed", fixed_arg, "Static bidders, player:bid list");
  learn_cmd->add_option("--out", out_arg, "Trajectory CSV path");
  learn_cmd->add_option("--every", every, "Write every k-th round");
  learn_cmd->add_option("--eta", fixed_eta, "Fixed step size (default anytime)");
  learn_cmd->add_option("--parallel", parallel, "Independent replicas");

  auto* bayes_cmd =
      app.add_subcommand("learn-bayes", "No-regret dynamics, redrawn types");
  bayes_cmd->add_option("--dist", dist_arg, "Distribution file")->required();
  bayes_cmd->add_option("--grid", grid);
  bayes_cmd->add_option("--rounds", rounds);
  bayes_cmd->add_option("--seed", seed);
  bayes_cmd->add_option("--out", out_arg);
  bayes_cmd->add_option("--every", every);
  bayes_cmd->add_option("--eta", fixed_eta);
  bayes_cmd->add_option("--parallel", parallel);

  auto* cce_cmd = app.add_subcommand("cce-check", "Deviation slack of a trajectory");
  cce_cmd->add_option("--instance", instance_arg)->required();
  cce_cmd->add_option("--history", history_arg, "Trajectory CSV")->required();
  cce_cmd->add_option("--grid", grid, "Deviation bids per player");

  auto* bounds_cmd = app.add_subcommand("verify-bounds", "Numeric certificates");
  bounds_cmd->add_option(
      "--which", which, "all | bayes | fullinfo | technical | constants | counterexample");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Exit code contract: 0 pass, 1 verification failure, 2 usage error.
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) {
      Timer timer;
      const gsp::AuctionInstance instance = gsp::resolve_instance(instance_arg);
      const gsp::BidProfile bids{parse_doubles(bids_arg)};
      const gsp::Outcome outcome = gsp::run_auction(instance, bids);
      const json params = {{"instance", instance_arg}, {"bids", bids_arg}};
      emit(manifest_json("run", params, timer.ms(), outcome_json(outcome)));
      return 0;
    }

    if (verify_cmd->parsed()) {
      Timer timer;
      const gsp::AuctionInstance instance = gsp::resolve_instance(instance_arg);
      const gsp::BidProfile bids{parse_doubles(bids_arg)};
      gsp::EquilibriumReport report;
      if (eps >= 0.0) {
        report = gsp::verify_epsilon_ne(instance, bids, eps);
      } else if (!subset_arg.empty()) {
        report = gsp::verify_s_ne(instance, bids, parse_players(subset_arg), tolerance);
      } else {
        report = gsp::verify_pure_ne(instance, bids, tolerance);
      }
      const json params = {{"instance", instance_arg},
                           {"bids", bids_arg},
                           {"eps", eps},
                           {"subset", subset_arg},
                           {"tol", tolerance}};
      emit(manifest_json("verify-ne", params, timer.ms(), report_json(report)));
      return report.is_equilibrium ? 0 : 1;
    }

    if (weakfeas_cmd->parsed()) {
      Timer timer;
      const gsp::AuctionInstance instance = gsp::resolve_instance(instance_arg);
      gsp::Permutation perm;
      for (int p : parse_players(perm_arg)) perm.push_back(p);
      const auto result = gsp::weak_feasibility(instance, perm);
      json doc;
      doc["holds"] = result.holds;
      json violations = json::array();
      for (const auto& [i, j] : result.violations) {
        violations.push_back({i + 1, j + 1});
      }
      doc["violations"] = violations;
      const json params = {{"instance", instance_arg}, {"perm", perm_arg}};
      emit(manifest_json("weakfeas", params, timer.ms(), doc));
      return result.holds ? 0 : 1;
    }

    if (poa_cmd->parsed()) {
      Timer timer;
      const json params = {{"n", n},       {"perm", perm_arg},   {"budget", budget},
                           {"seed", seed}, {"method", method},   {"parallel", parallel}};
      gsp::SearchResult result;
      if (method == "closed-form" || (method == "auto" && perm_arg.empty() && n <= 3)) {
        if (n == 2) {
          result = gsp::worst_case_n2();
        } else if (n == 3) {
          result = gsp::worst_case_n3();
        } else {
          std::cerr << "closed-form search is available for n = 2 or 3\n";
          return 2;
        }
      } else if (method == "numeric" || method == "auto") {
        std::optional<gsp::Permutation> perm;
        if (!perm_arg.empty()) {
          gsp::Permutation p;
          for (int v : parse_players(perm_arg)) p.push_back(v);
          perm = p;
        }
        if (parallel <= 1) {
          result = gsp::worst_case_numeric(n, perm, budget, seed);
        } else {
          result = gsp::worst_case_numeric(n, perm, budget, seed);
          for (int r = 1; r < parallel; ++r) {
            gsp::SearchResult other = gsp::worst_case_numeric(n, perm, budget, seed + r);
            if (other.best_ratio > result.best_ratio) result = std::move(other);
          }
        }
      } else {
        std::cerr << "unknown --method " << method << "\n";
        return 2;
      }
      emit(manifest_json("poa-search", params, timer.ms(), search_json(result)));
      return result.bound_violated ? 1 : 0;
    }

    if (learn_cmd->parsed() || bayes_cmd->parsed()) {
      gsp::LearnerConfig config;
      config.grid_size = grid;
      config.horizon = rounds;
      config.seed = seed;
      if (fixed_eta > 0.0) config.fixed_eta = fixed_eta;
      const json params = {{"instance", instance_arg}, {"dist", dist_arg},
                           {"grid", grid},             {"rounds", rounds},
                           {"seed", seed},             {"fixed", fixed_arg},
                           {"out", out_arg},           {"every", every},
                           {"eta", fixed_eta},         {"parallel", parallel}};
      return run_learn(instance_arg, bayes_cmd->parsed() ? dist_arg : "", config,
                       fixed_arg.empty() ? std::map<int, double>{}
                                         : parse_fixed(fixed_arg),
                       out_arg, every, parallel, params);
    }

    if (cce_cmd->parsed()) {
      Timer timer;
      const gsp::AuctionInstance instance = gsp::resolve_instance(instance_arg);
      std::ifstream in(history_arg);
      if (!in) throw std::runtime_error("cannot open file: " + history_arg);
      const auto profiles = gsp::read_trajectory_profiles(in, instance.n());
      gsp::EmpiricalDistribution dist;
      // Merge duplicates with uniform weights.
      std::map<std::vector<double>, double> merged;
      const double w = 1.0 / static_cast<double>(profiles.size());
      for (const auto& profile : profiles) {
        merged[std::vector<double>(profile.data(), profile.data() + profile.size())] +=
            w;
      }
      for (const auto& [key, weight] : merged) {
        dist.weights.push_back(weight);
        dist.bid_profiles.push_back(Eigen::Map<const gsp::Vector>(
            key.data(), static_cast<Eigen::Index>(key.size())));
      }
      const gsp::Vector epsilon = gsp::cce_epsilon(instance, dist, grid);
      json doc;
      doc["per_player_epsilon"] = vector_json(epsilon);
      doc["max_epsilon"] = epsilon.maxCoeff();
      doc["profiles"] = profiles.size();
      const json params = {{"instance", instance_arg},
                           {"history", history_arg},
                           {"grid", grid}};
      emit(manifest_json("cce-check", params, timer.ms(), doc));
      return 0;
    }

    if (bounds_cmd->parsed()) {
      Timer timer;
      bool all_pass = true;
      json docs = json::array();
      const auto add_report = [&](const gsp::CertificateReport& report) {
        std::cerr << report.to_text();
        docs.push_back(certificate_json(report));
        all_pass = all_pass && report.pass();
      };
      if (which == "all" || which == "bayes") {
        add_report(gsp::verify_bounded_function({1.7507, 0.225, 0.7966}, 2000));
      }
      if (which == "all" || which == "fullinfo") {
        const double root = gsp::solve_lambda_root();
        add_report(gsp::verify_cor_bounded_function(root, 2000));
      }
      if (which == "all" || which == "technical") {
        add_report(gsp::verify_technical_lemmas());
      }
      if (which == "all" || which == "constants") {
        json table = json::array();
        bool ok = true;
        std::cerr << "theoretical constants\n";
        for (const auto& row : gsp::theoretical_constants()) {
          json r;
          r["name"] = row.name;
          r["computed"] = row.computed;
          r["reference"] = row.reference;
          r["diff"] = row.diff;
          table.push_back(r);
          const bool row_ok = row.diff <= 5e-4;
          ok = ok && row_ok;
          std::cerr << "  [" << (row_ok ? "PASS" : "FAIL") << "] " << row.name << ": "
                    << row.computed << " vs " << row.reference << " (diff " << row.diff
                    << ")\n";
        }
        docs.push_back({{"title", "theoretical constants"}, {"rows", table},
                        {"pass", ok}});
        all_pass = all_pass && ok;
      }
      if (which == "all" || which == "counterexample") {
        json doc;
        bool ok = true;
        try {
          const auto witness =
              gsp::smoothness_counterexample(1.0 - 1.0 / std::exp(1.0), 1.0);
          doc["violation_at_semi_smooth_params"] = witness.violation;
          const auto tiny = gsp::smoothness_counterexample(0.01, 0.0);
          doc["violation_at_small_lambda"] = tiny.violation;
        } catch (const std::exception& e) {
          doc["error"] = e.what();
          ok = false;
        }
        doc["pass"] = ok;
        std::cerr << "smoothness counterexample: " << (ok ? "PASS" : "FAIL") << "\n";
        docs.push_back(doc);
        all_pass = all_pass && ok;
      }
      if (docs.empty()) {
        std::cerr << "unknown --which " << which << "\n";
        return 2;
      }
      const json params = {{"which", which}};
      emit(manifest_json("verify-bounds", params, timer.ms(),
                         json{{"pass", all_pass}, {"reports", docs}}));
      return all_pass ? 0 : 1;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
