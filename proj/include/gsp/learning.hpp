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

#ifndef GSP_LEARNING_HPP
#define GSP_LEARNING_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "gsp/auction.hpp"
#include "gsp/instance.hpp"
#include "gsp/types.hpp"

namespace gsp {

// Multiplicative-weights learner configuration. Each player keeps a uniform
// bid grid on [0, v_i] (endpoints included). Without a fixed step size the
// anytime schedule eta_t = sqrt(8 ln K / t) is used. Utilities are divided by
// a per-player scale (default alpha_1 * gamma_i * v_i) before the update.
struct LearnerConfig {
  int grid_size = 51;
  std::int64_t horizon = 0;
  std::optional<double> fixed_eta;
  std::uint64_t seed = 0;
  std::optional<Vector> payoff_scale;  // override; must be positive where used
};

void validate_config(const LearnerConfig& config);

struct PlayHistory {
  struct Round {
    Vector valuations;
    Vector gammas;
    Vector bids;
    Outcome outcome;
    double opt = 0.0;             // OPT of the realized instance
    double opt_restricted = 0.0;  // OPT over the learning players only
    int support_index = 0;        // realized support point (0 when fixed)
  };

  // Per-type learner bookkeeping (full-information runs have one type per
  // player; fixed bidders have none).
  struct TypeRecord {
    double type_value = 0.0;
    std::int64_t updates = 0;
    double cumulative_regret = 0.0;   // realized external regret on its rounds
    std::vector<double> regret_curve;  // after each of its updates
  };

  int n = 0;
  std::vector<Round> rounds;
  // Realized cumulative external regret of player i after round t (best fixed
  // grid bid in hindsight minus collected utility; not floored).
  std::vector<Vector> regret_curves;  // [player][round]
  std::vector<std::vector<TypeRecord>> types;  // [player][type]
  std::vector<int> learning_players;           // players that ran a learner
  double total_welfare = 0.0;
  double total_opt = 0.0;
  double total_opt_restricted = 0.0;

  // max_i regret_i(T) / T, floored at zero.
  double max_average_regret() const;
  // max over (player, type) of its average realized regret, floored at zero.
  double max_average_type_regret() const;
};

// Repeated full-information play: every player samples from her weights each
// round, observes the counterfactual utility of every grid bid against the
// realized opponent bids, and updates. Deterministic given the seed.
PlayHistory run_no_regret(const AuctionInstance& instance, const LearnerConfig& config);

// Repeated play with (valuations, gammas) redrawn from the distribution each
// round. Each player keeps one independent learner per distinct own valuation
// in the support and updates only the learner matching the realized type.
PlayHistory run_no_regret_bayes(const JointDistribution& dist,
                                const LearnerConfig& config);

// As run_no_regret / run_no_regret_bayes, but the mapped players bid their
// fixed conservative value every round and never update. Records the optimal
// welfare restricted to the learning players alongside the welfare sums.
PlayHistory run_with_irrational(const AuctionInstance& instance,
                                const LearnerConfig& config,
                                const std::map<int, double>& fixed_bidders);
PlayHistory run_with_irrational(const JointDistribution& dist,
                                const LearnerConfig& config,
                                const std::map<int, double>& fixed_bidders);

struct EmpiricalDistribution {
  std::vector<double> weights;        // positive, summing to one
  std::vector<Vector> bid_profiles;   // distinct profiles
};

// Uniform distribution over the bid profiles of rounds [begin, end), with
// duplicate profiles merged.
EmpiricalDistribution empirical_distribution(const PlayHistory& history,
                                             std::int64_t begin, std::int64_t end);
EmpiricalDistribution empirical_distribution(const PlayHistory& history);

// Per-player coarse-correlated-equilibrium slack: the gain of the best fixed
// deviation bid from a uniform grid of `deviation_grid` points on [0, v_i]
// over the expected utility under `dist`, floored at zero. Exact expectation
// over the finite support.
Vector cce_epsilon(const AuctionInstance& instance, const EmpiricalDistribution& dist,
                   int deviation_grid);
Vector cce_epsilon(const AuctionInstance& instance, const EmpiricalDistribution& dist,
                   const std::vector<Vector>& deviation_bids);

// Sum of realized OPT over sum of realized welfare; +infinity when the
// welfare sum is zero but the OPT sum is not.
double pota_estimate(const PlayHistory& history);
double pota_estimate(const PlayHistory& history, std::int64_t begin, std::int64_t end);

// Worst-case cumulative external regret of the configured learner after T
// rounds, for utilities in [0, scale].
double hedge_regret_bound(const LearnerConfig& config, std::int64_t rounds,
                          double scale);

// Trajectory CSV: header and one row per (round, player) with columns
// round,player,bid,regret,cum_sw,cum_opt,running_pota
// and `every` thinning the rounds (the final round is always written).
// Numbers use shortest round-trip formatting; output is bit-stable for a
// given history.
void write_trajectory_csv(const PlayHistory& history, std::ostream& out,
                          std::int64_t every = 1);

// Reads back the bid profiles of a trajectory written by write_trajectory_csv.
std::vector<Vector> read_trajectory_profiles(std::istream& in, int n);

}  // namespace gsp

#endif  // GSP_LEARNING_HPP
