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

#include <cmath>
#include <map>
#include <sstream>

#include "gsp/auction.hpp"
#include "gsp/equilibria.hpp"
#include "gsp/instance.hpp"
#include "gsp/learning.hpp"
#include "gsp/random.hpp"

using namespace gsp;

namespace {

std::string trajectory_string(const PlayHistory& history, std::int64_t every = 1) {
  std::ostringstream out;
  write_trajectory_csv(history, out, every);
  return out.str();
}

JointDistribution three_point_distribution() {
  JointDistribution dist;
  dist.alphas = (Vector(3) << 1.0, 0.6, 0.3).finished();
  dist.support.push_back(
      {1.0 / 3.0, (Vector(3) << 1.0, 0.5, 0.25).finished(), Vector::Ones(3)});
  dist.support.push_back(
      {1.0 / 3.0, (Vector(3) << 0.9, 0.6, 0.3).finished(), Vector::Ones(3)});
  dist.support.push_back(
      {1.0 / 3.0, (Vector(3) << 0.8, 0.4, 0.35).finished(), Vector::Ones(3)});
  validate_distribution(dist);
  return dist;
}

}  // namespace

TEST_CASE("config validation") {
  LearnerConfig config;
  config.horizon = 0;
  CHECK_THROWS_AS(validate_config(config), std::invalid_argument);
  config.horizon = 10;
  config.grid_size = 1;
  CHECK_THROWS_AS(validate_config(config), std::invalid_argument);
  config.grid_size = 5;
  config.fixed_eta = 0.0;
  CHECK_THROWS_AS(validate_config(config), std::invalid_argument);
  config.fixed_eta = 0.5;
  CHECK_NOTHROW(validate_config(config));
}

TEST_CASE("single player has identically zero regret") {
  const AuctionInstance instance =
      make_instance((Vector(1) << 0.8).finished(), (Vector(1) << 0.7).finished());
  LearnerConfig config;
  config.grid_size = 11;
  config.horizon = 200;
  config.seed = 5;
  const PlayHistory history = run_no_regret(instance, config);
  CHECK(history.regret_curves[0].cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(pota_estimate(history) == doctest::Approx(1.0));
}

TEST_CASE("one-round regret equals the best fixed bid gap") {
  Rng rng(401);
  for (int trial = 0; trial < 50; ++trial) {
    const AuctionInstance instance = random_instance(rng, 2 + trial % 4, {});
    LearnerConfig config;
    config.grid_size = 17;
    config.horizon = 1;
    config.seed = 1000 + trial;
    const PlayHistory history = run_no_regret(instance, config);
    const BidProfile realized{history.rounds[0].bids};
    for (int i = 0; i < instance.n(); ++i) {
      double best_arm = 0.0;
      for (int a = 0; a < config.grid_size; ++a) {
        const double bid =
            instance.valuations[i] * a / static_cast<double>(config.grid_size - 1);
        best_arm = std::max(best_arm, deviation_utility(instance, realized, i, bid));
      }
      const double expected_regret =
          best_arm - history.rounds[0].outcome.utilities[i];
      CHECK(history.regret_curves[i][0] ==
            doctest::Approx(expected_regret).epsilon(1e-12));
    }
  }
}

TEST_CASE("identical seeds give bit-identical trajectories") {
  const auto instance = reference_instance("poa2").first;
  LearnerConfig config;
  config.grid_size = 21;
  config.horizon = 2000;
  config.seed = 77;
  const PlayHistory a = run_no_regret(instance, config);
  const PlayHistory b = run_no_regret(instance, config);
  CHECK(trajectory_string(a) == trajectory_string(b));
  config.seed = 78;
  const PlayHistory c = run_no_regret(instance, config);
  CHECK(trajectory_string(a) != trajectory_string(c));
}

TEST_CASE("degenerate distribution reproduces the fixed-instance run") {
  const auto instance = reference_instance("poa2").first;
  JointDistribution dist;
  dist.alphas = instance.alphas;
  dist.support.push_back({1.0, instance.valuations, instance.gammas});
  LearnerConfig config;
  config.grid_size = 15;
  config.horizon = 1500;
  config.seed = 3;
  CHECK(trajectory_string(run_no_regret(instance, config)) ==
        trajectory_string(run_no_regret_bayes(dist, config)));
}

TEST_CASE("per-type learners update only on their rounds") {
  JointDistribution dist;
  dist.alphas = (Vector(2) << 1.0, 0.5).finished();
  dist.support.push_back({0.4, (Vector(2) << 1.0, 0.5).finished(), Vector::Ones(2)});
  dist.support.push_back({0.6, (Vector(2) << 0.7, 0.5).finished(), Vector::Ones(2)});
  LearnerConfig config;
  config.grid_size = 9;
  config.horizon = 3000;
  config.seed = 11;
  const PlayHistory history = run_no_regret_bayes(dist, config);

  // Player 1 has two types, player 2 one.
  CHECK(history.types[0].size() == 2);
  CHECK(history.types[1].size() == 1);

  std::map<double, std::int64_t> realized;
  for (const auto& round : history.rounds) realized[round.valuations[0]]++;
  for (const auto& record : history.types[0]) {
    CHECK(record.updates == realized[record.type_value]);
    CHECK(record.updates == static_cast<std::int64_t>(record.regret_curve.size()));
  }
  CHECK(history.types[1][0].updates == config.horizon);
}

TEST_CASE("recorded play is conservative and sums match") {
  const auto dist = three_point_distribution();
  LearnerConfig config;
  config.grid_size = 13;
  config.horizon = 2500;
  config.seed = 21;
  const PlayHistory history = run_no_regret_bayes(dist, config);

  double welfare = 0.0;
  double opt = 0.0;
  double opt_restricted = 0.0;
  for (const auto& round : history.rounds) {
    for (int i = 0; i < history.n; ++i) {
      CHECK(round.bids[i] <= round.valuations[i] + kOverbidTolerance);
      CHECK(round.bids[i] >= 0.0);
    }
    const AuctionInstance instance{dist.alphas, round.valuations, round.gammas};
    CHECK(round.opt == doctest::Approx(optimal_welfare(instance).value));
    welfare += round.outcome.welfare;
    opt += round.opt;
    opt_restricted += round.opt_restricted;
  }
  CHECK(history.total_welfare == doctest::Approx(welfare).epsilon(1e-12));
  CHECK(history.total_opt == doctest::Approx(opt).epsilon(1e-12));
  CHECK(history.total_opt_restricted ==
        doctest::Approx(opt_restricted).epsilon(1e-12));
}

TEST_CASE("measured regret respects the learner guarantee") {
  const auto instance = reference_instance("poa2").first;
  LearnerConfig config;
  config.grid_size = 21;
  config.horizon = 4000;
  config.seed = 31;
  const PlayHistory history = run_no_regret(instance, config);
  for (int i = 0; i < instance.n(); ++i) {
    const double scale = instance.alphas[0] * instance.gammas[i] *
                         instance.valuations[i];
    const double bound = hedge_regret_bound(config, config.horizon, scale);
    CHECK(history.regret_curves[i][config.horizon - 1] <= bound);
  }
  SUBCASE("fixed step size variant") {
    config.fixed_eta = 0.05;
    const PlayHistory fixed = run_no_regret(instance, config);
    for (int i = 0; i < instance.n(); ++i) {
      const double scale = instance.alphas[0] * instance.gammas[i] *
                           instance.valuations[i];
      CHECK(fixed.regret_curves[i][config.horizon - 1] <=
            hedge_regret_bound(config, config.horizon, scale));
    }
  }
}

TEST_CASE("average regret decays along doubling checkpoints") {
  const auto instance = reference_instance("poa2").first;
  LearnerConfig config;
  config.grid_size = 21;
  config.horizon = 1 << 13;
  config.seed = 41;
  const PlayHistory history = run_no_regret(instance, config);
  for (int i = 0; i < instance.n(); ++i) {
    const double scale = instance.alphas[0] * instance.valuations[i];
    for (std::int64_t t = 64; 2 * t <= config.horizon; t *= 2) {
      const double at_t = std::max(0.0, history.regret_curves[i][t - 1]) / t;
      const double at_2t = std::max(0.0, history.regret_curves[i][2 * t - 1]) / (2 * t);
      const double noise =
          0.05 * scale * std::sqrt(std::log(config.grid_size) / (2.0 * t));
      CHECK(at_2t <= 1.05 * at_t + noise);
    }
  }
}

TEST_CASE("empirical distribution windows") {
  const auto instance = reference_instance("poa2").first;
  LearnerConfig config;
  config.grid_size = 7;
  config.horizon = 400;
  config.seed = 51;
  const PlayHistory history = run_no_regret(instance, config);

  SUBCASE("full window weights sum to one") {
    const auto dist = empirical_distribution(history);
    double total = 0.0;
    for (double w : dist.weights) {
      CHECK(w > 0.0);
      total += w;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dist.bid_profiles.size() <= history.rounds.size());
    // A coarse grid over many rounds necessarily repeats profiles.
    CHECK(dist.bid_profiles.size() < history.rounds.size());
  }
  SUBCASE("half window uniform weights") {
    const auto dist = empirical_distribution(history, 200, 400);
    double total = 0.0;
    for (std::size_t k = 0; k < dist.weights.size(); ++k) {
      // Every weight is a multiple of 2/T.
      const double unit = dist.weights[k] / (2.0 / 400.0);
      CHECK(unit == doctest::Approx(std::round(unit)).epsilon(1e-9));
      total += dist.weights[k];
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("empty window rejected") {
    CHECK_THROWS_AS(empirical_distribution(history, 10, 10), std::invalid_argument);
    CHECK_THROWS_AS(empirical_distribution(history, -1, 10), std::invalid_argument);
    CHECK_THROWS_AS(empirical_distribution(history, 0, 401), std::invalid_argument);
  }
}

TEST_CASE("cce epsilon") {
  const auto [instance, ne_bids] = reference_instance("poa2");
  SUBCASE("a point mass at a pure equilibrium is a CCE") {
    EmpiricalDistribution dist;
    dist.weights = {1.0};
    dist.bid_profiles = {ne_bids.bids};
    const Vector epsilon = cce_epsilon(instance, dist, 51);
    CHECK(epsilon.maxCoeff() <= 1e-9);
  }
  SUBCASE("mixtures of equilibria report their computed slack") {
    EmpiricalDistribution dist;
    dist.weights = {0.5, 0.5};
    dist.bid_profiles = {ne_bids.bids, (Vector(2) << 1.0, 0.5).finished()};
    const Vector epsilon = cce_epsilon(instance, dist, 101);
    CHECK(epsilon.minCoeff() >= 0.0);
  }
  SUBCASE("matches the final average regret when grids coincide") {
    LearnerConfig config;
    config.grid_size = 11;
    config.horizon = 600;
    config.seed = 61;
    const PlayHistory history = run_no_regret(instance, config);
    const auto dist = empirical_distribution(history);
    const Vector epsilon = cce_epsilon(instance, dist, config.grid_size);
    for (int i = 0; i < instance.n(); ++i) {
      const double avg_regret =
          std::max(0.0, history.regret_curves[i][config.horizon - 1]) /
          config.horizon;
      CHECK(epsilon[i] <= avg_regret + 1e-9);
      CHECK(epsilon[i] == doctest::Approx(avg_regret).epsilon(1e-9));
    }
  }
}

TEST_CASE("pota estimate conventions") {
  PlayHistory history;
  history.n = 1;
  PlayHistory::Round round;
  round.outcome.welfare = 0.0;
  round.opt = 1.0;
  history.rounds.push_back(round);
  CHECK(pota_estimate(history) == std::numeric_limits<double>::infinity());
  history.rounds[0].outcome.welfare = 0.5;
  CHECK(pota_estimate(history) == doctest::Approx(2.0));
  CHECK_THROWS_AS(pota_estimate(history, 0, 0), std::invalid_argument);
}

TEST_CASE("welfare of the empirical distribution meets the headline floors") {
  for (const char* name : {"poa2", "poa3"}) {
    const auto instance = reference_instance(name).first;
    LearnerConfig config;
    config.grid_size = 21;
    config.horizon = 8000;
    config.seed = 71;
    const PlayHistory history = run_no_regret(instance, config);
    const double mean_welfare =
        history.total_welfare / static_cast<double>(config.horizon);
    const double opt = optimal_welfare(instance).value;
    const double rho = history.max_average_regret();
    CHECK(mean_welfare >= opt / 3.0 - 3.0 * rho);
    CHECK(mean_welfare >= opt / 2.3102 - 3.0 * rho);
  }
}

TEST_CASE("fixed bidders") {
  const auto instance = reference_instance("poa3").first;
  LearnerConfig config;
  config.grid_size = 15;
  config.horizon = 3000;
  config.seed = 81;

  SUBCASE("empty fixed set reproduces the plain run") {
    CHECK(trajectory_string(run_with_irrational(instance, config, {})) ==
          trajectory_string(run_no_regret(instance, config)));
  }
  SUBCASE("all players fixed is rejected") {
    CHECK_THROWS_AS(
        run_with_irrational(instance, config, {{0, 0.1}, {1, 0.1}, {2, 0.1}}),
        std::invalid_argument);
  }
  SUBCASE("fixed overbid is rejected") {
    CHECK_THROWS_AS(run_with_irrational(instance, config, {{2, 0.2}}),
                    std::invalid_argument);
  }
  SUBCASE("fixed player never updates and bids statically") {
    const PlayHistory history = run_with_irrational(instance, config, {{2, 0.1}});
    CHECK(history.learning_players == std::vector<int>{0, 1});
    CHECK(history.types[2].empty());
    for (const auto& round : history.rounds) {
      CHECK(round.bids[2] == 0.1);
    }
    CHECK(history.regret_curves[2].cwiseAbs().maxCoeff() == 0.0);
    // Restricted optimum ignores the fixed player.
    CHECK(history.rounds[0].opt_restricted ==
          doctest::Approx(restricted_optimal_welfare(instance, {0, 1})));
  }
  SUBCASE("lone learner against zero bidders") {
    const AuctionInstance flat = make_instance(
        (Vector(3) << 1.0, 0.4, 0.1).finished(),
        (Vector(3) << 0.8, 0.5, 0.6).finished());
    const PlayHistory history =
        run_with_irrational(flat, config, {{1, 0.0}, {2, 0.0}});
    // OPT restricted to the single learner: her value on the top slot.
    CHECK(history.rounds[0].opt_restricted == doctest::Approx(0.8));
    CHECK(history.max_average_regret() <= 0.05);
    CHECK(history.total_welfare / config.horizon >= 0.8 * 0.9);
  }
}

TEST_CASE("bayesian run meets the headline bound with slack") {
  const auto dist = three_point_distribution();
  LearnerConfig config;
  config.grid_size = 15;
  config.horizon = 6000;
  config.seed = 91;
  const PlayHistory history = run_no_regret_bayes(dist, config);
  const double pota = pota_estimate(history);
  CHECK(pota <= 2.927 + 3.0 * history.max_average_type_regret());
  CHECK(pota >= 1.0);
}

TEST_CASE("trajectory round trip and thinning") {
  const auto instance = reference_instance("poa2").first;
  LearnerConfig config;
  config.grid_size = 9;
  config.horizon = 250;
  config.seed = 101;
  const PlayHistory history = run_no_regret(instance, config);

  SUBCASE("profiles read back exactly") {
    std::stringstream stream(trajectory_string(history));
    const auto profiles = read_trajectory_profiles(stream, instance.n());
    REQUIRE(profiles.size() == history.rounds.size());
    for (std::size_t t = 0; t < profiles.size(); ++t) {
      CHECK(profiles[t] == history.rounds[t].bids);
    }
  }
  SUBCASE("thinning keeps the final round") {
    std::stringstream stream(trajectory_string(history, 64));
    const auto profiles = read_trajectory_profiles(stream, instance.n());
    CHECK(profiles.size() == 250 / 64 + 1);
    CHECK(profiles.back() == history.rounds.back().bids);
  }
  SUBCASE("malformed input rejected") {
    std::stringstream empty("");
    CHECK_THROWS_AS(read_trajectory_profiles(empty, 2), std::invalid_argument);
    std::stringstream bad_header("time,who,offer\n");
    CHECK_THROWS_AS(read_trajectory_profiles(bad_header, 2), std::invalid_argument);
    std::stringstream truncated("round,player,bid,regret,cum_sw,cum_opt,running_pota\n1,1,0.5,0,1,1,1\n");
    CHECK_THROWS_AS(read_trajectory_profiles(truncated, 2), std::invalid_argument);
  }
}

TEST_CASE("payoff scale override") {
  const auto instance = reference_instance("poa2").first;
  LearnerConfig config;
  config.grid_size = 11;
  config.horizon = 500;
  config.seed = 111;
  config.payoff_scale = (Vector(2) << 2.0, 2.0).finished();
  CHECK_NOTHROW(run_no_regret(instance, config));
  config.payoff_scale = Vector::Ones(3);
  CHECK_THROWS_AS(run_no_regret(instance, config), std::invalid_argument);
}
