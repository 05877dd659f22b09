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

#include "gsp/learning.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "gsp/random.hpp"

namespace gsp {

void validate_config(const LearnerConfig& config) {
  if (config.grid_size < 2) {
    throw std::invalid_argument("learner config: grid_size must be at least 2");
  }
  if (config.horizon < 1) {
    throw std::invalid_argument("learner config: horizon must be at least 1");
  }
  if (config.fixed_eta && !(*config.fixed_eta > 0.0)) {
    throw std::invalid_argument("learner config: eta must be positive");
  }
}

double PlayHistory::max_average_regret() const {
  double worst = 0.0;
  const auto rounds_played = static_cast<double>(rounds.size());
  for (int i : learning_players) {
    if (regret_curves[i].size() == 0) continue;
    worst = std::max(worst, regret_curves[i][regret_curves[i].size() - 1] /
                                rounds_played);
  }
  return std::max(0.0, worst);
}

double PlayHistory::max_average_type_regret() const {
  double worst = 0.0;
  for (int i : learning_players) {
    for (const auto& record : types[i]) {
      if (record.updates == 0) continue;
      worst = std::max(worst, record.cumulative_regret /
                                  static_cast<double>(record.updates));
    }
  }
  return std::max(0.0, worst);
}

namespace {

struct HedgeLearner {
  Vector grid;        // candidate bids on [0, type_value]
  Vector cum_reward;  // cumulative counterfactual utility per arm (currency)
  double scale = 1.0;
  double type_value = 0.0;
  std::int64_t updates = 0;
  double cum_utility = 0.0;  // realized utility on this learner's rounds
  std::vector<double> regret_curve;

  double cumulative_regret() const { return cum_reward.maxCoeff() - cum_utility; }
};

Vector uniform_grid(double hi, int k) {
  Vector grid(k);
  for (int a = 0; a < k; ++a) {
    grid[a] = hi * static_cast<double>(a) / (k - 1);
  }
  return grid;
}

// Anytime schedule unless a fixed step is configured.
double step_size(const LearnerConfig& config, int grid, std::int64_t t) {
  if (config.fixed_eta) return *config.fixed_eta;
  return std::sqrt(8.0 * std::log(static_cast<double>(grid)) /
                   static_cast<double>(t));
}

int sample_arm(const HedgeLearner& learner, const LearnerConfig& config, Rng& rng) {
  const int k = static_cast<int>(learner.grid.size());
  const double eta = step_size(config, k, learner.updates + 1);
  const Vector logits = (eta / learner.scale) * learner.cum_reward;
  const double shift = logits.maxCoeff();
  Vector weights = (logits.array() - shift).exp();
  const double total = weights.sum();
  double u = rng.uniform() * total;
  for (int a = 0; a < k; ++a) {
    u -= weights[a];
    if (u < 0.0) return a;
  }
  return k - 1;
}

// Shared engine for the fixed-instance and redrawn-types runs.
PlayHistory run_core(const JointDistribution& dist, const LearnerConfig& config,
                     const std::map<int, double>& fixed_bidders) {
  validate_config(config);
  validate_distribution(dist);
  const int n = dist.n();
  const auto num_points = static_cast<int>(dist.support.size());

  for (const auto& [player, bid] : fixed_bidders) {
    if (player < 0 || player >= n) {
      throw std::invalid_argument("fixed bidder index out of range");
    }
    if (!(bid >= 0.0)) throw std::invalid_argument("fixed bid must be non-negative");
    for (const auto& point : dist.support) {
      if (bid > point.valuations[player] + kOverbidTolerance) {
        throw std::invalid_argument(
            "fixed bid overbids a realized valuation of the player");
      }
    }
  }

  PlayHistory history;
  history.n = n;
  history.types.resize(n);
  for (int i = 0; i < n; ++i) {
    if (!fixed_bidders.count(i)) history.learning_players.push_back(i);
  }
  if (history.learning_players.empty()) {
    throw std::invalid_argument("all players fixed: nothing to learn");
  }

  // One learner per distinct own valuation in the support. The payoff scale
  // is the largest utility the type can realize, alpha_1 * gamma_i * v_i.
  std::vector<std::map<double, HedgeLearner>> learners(n);
  for (int i : history.learning_players) {
    for (int s = 0; s < num_points; ++s) {
      const double value = dist.support[s].valuations[i];
      auto [it, inserted] = learners[i].try_emplace(value);
      HedgeLearner& learner = it->second;
      if (inserted) {
        learner.type_value = value;
        learner.grid = uniform_grid(value, config.grid_size);
        learner.cum_reward = Vector::Zero(config.grid_size);
        learner.scale = 0.0;
      }
      learner.scale =
          std::max(learner.scale, dist.alphas[0] * dist.support[s].gammas[i] * value);
    }
    if (config.payoff_scale) {
      if (config.payoff_scale->size() != n) {
        throw std::invalid_argument("payoff_scale must have one entry per player");
      }
      for (auto& [value, learner] : learners[i]) {
        learner.scale = (*config.payoff_scale)[i];
      }
    }
    for (auto& [value, learner] : learners[i]) {
      if (!(learner.scale > 0.0)) learner.scale = 1.0;  // degenerate zero-value type
    }
  }

  Rng rng(config.seed);
  std::vector<double> probs(num_points);
  for (int s = 0; s < num_points; ++s) probs[s] = dist.support[s].prob;

  history.rounds.reserve(config.horizon);
  history.regret_curves.assign(n, Vector::Zero(config.horizon));
  BidProfile bids{Vector::Zero(n)};

  for (std::int64_t t = 0; t < config.horizon; ++t) {
    const int s = num_points > 1 ? rng.categorical(probs) : 0;
    const AuctionInstance instance = instance_at(dist, s);

    for (int i = 0; i < n; ++i) {
      if (auto it = fixed_bidders.find(i); it != fixed_bidders.end()) {
        bids.bids[i] = it->second;
      } else {
        HedgeLearner& learner = learners[i].at(instance.valuations[i]);
        bids.bids[i] = learner.grid[sample_arm(learner, config, rng)];
      }
    }

    PlayHistory::Round round;
    round.valuations = instance.valuations;
    round.gammas = instance.gammas;
    round.bids = bids.bids;
    round.outcome = run_auction(instance, bids);
    round.opt = optimal_welfare(instance).value;
    round.opt_restricted =
        restricted_optimal_welfare(instance, history.learning_players);
    round.support_index = s;

    for (int i : history.learning_players) {
      HedgeLearner& learner = learners[i].at(instance.valuations[i]);
      for (int a = 0; a < config.grid_size; ++a) {
        learner.cum_reward[a] +=
            deviation_utility(instance, bids, i, learner.grid[a]);
      }
      learner.cum_utility += round.outcome.utilities[i];
      ++learner.updates;
      learner.regret_curve.push_back(learner.cumulative_regret());
      // Player-level curve: total realized regret across the type learners.
      double total = 0.0;
      for (const auto& [value, other] : learners[i]) {
        if (other.updates > 0) total += other.cumulative_regret();
      }
      history.regret_curves[i][t] = total;
    }

    history.total_welfare += round.outcome.welfare;
    history.total_opt += round.opt;
    history.total_opt_restricted += round.opt_restricted;
    history.rounds.push_back(std::move(round));
  }

  for (int i : history.learning_players) {
    for (auto& [value, learner] : learners[i]) {
      PlayHistory::TypeRecord record;
      record.type_value = value;
      record.updates = learner.updates;
      record.cumulative_regret = learner.updates > 0 ? learner.cumulative_regret() : 0.0;
      record.regret_curve = std::move(learner.regret_curve);
      history.types[i].push_back(std::move(record));
    }
  }
  return history;
}

JointDistribution point_distribution(const AuctionInstance& instance) {
  validate_instance(instance);
  JointDistribution dist;
  dist.alphas = instance.alphas;
  dist.support.push_back({1.0, instance.valuations, instance.gammas});
  return dist;
}

}  // namespace

PlayHistory run_no_regret(const AuctionInstance& instance, const LearnerConfig& config) {
  return run_core(point_distribution(instance), config, {});
}

PlayHistory run_no_regret_bayes(const JointDistribution& dist,
                                const LearnerConfig& config) {
  return run_core(dist, config, {});
}

PlayHistory run_with_irrational(const AuctionInstance& instance,
                                const LearnerConfig& config,
                                const std::map<int, double>& fixed_bidders) {
  return run_core(point_distribution(instance), config, fixed_bidders);
}

PlayHistory run_with_irrational(const JointDistribution& dist,
                                const LearnerConfig& config,
                                const std::map<int, double>& fixed_bidders) {
  return run_core(dist, config, fixed_bidders);
}

EmpiricalDistribution empirical_distribution(const PlayHistory& history,
                                             std::int64_t begin, std::int64_t end) {
  const auto total = static_cast<std::int64_t>(history.rounds.size());
  if (begin < 0 || end > total || begin >= end) {
    throw std::invalid_argument("empirical_distribution: empty or invalid window");
  }
  const double weight = 1.0 / static_cast<double>(end - begin);
  std::map<std::vector<double>, double> merged;
  for (std::int64_t t = begin; t < end; ++t) {
    const Vector& bids = history.rounds[t].bids;
    std::vector<double> key(bids.data(), bids.data() + bids.size());
    merged[key] += weight;
  }
  EmpiricalDistribution dist;
  for (const auto& [key, w] : merged) {
    dist.weights.push_back(w);
    dist.bid_profiles.push_back(
        Eigen::Map<const Vector>(key.data(), static_cast<Eigen::Index>(key.size())));
  }
  return dist;
}

EmpiricalDistribution empirical_distribution(const PlayHistory& history) {
  return empirical_distribution(history, 0,
                                static_cast<std::int64_t>(history.rounds.size()));
}

Vector cce_epsilon(const AuctionInstance& instance, const EmpiricalDistribution& dist,
                   const std::vector<Vector>& deviation_bids) {
  validate_instance(instance);
  if (dist.weights.empty()) {
    throw std::invalid_argument("cce_epsilon: empty distribution");
  }
  if (static_cast<int>(deviation_bids.size()) != instance.n()) {
    throw std::invalid_argument("cce_epsilon: one deviation grid per player required");
  }
  const int n = instance.n();
  Vector epsilon = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    double base = 0.0;
    for (std::size_t p = 0; p < dist.weights.size(); ++p) {
      const BidProfile profile{dist.bid_profiles[p]};
      base += dist.weights[p] *
              deviation_utility(instance, profile, i, profile.bids[i]);
    }
    double best_gain = 0.0;
    for (int a = 0; a < deviation_bids[i].size(); ++a) {
      const double bid = deviation_bids[i][a];
      double dev = 0.0;
      for (std::size_t p = 0; p < dist.weights.size(); ++p) {
        const BidProfile profile{dist.bid_profiles[p]};
        dev += dist.weights[p] * deviation_utility(instance, profile, i, bid);
      }
      best_gain = std::max(best_gain, dev - base);
    }
    epsilon[i] = best_gain;
  }
  return epsilon;
}

Vector cce_epsilon(const AuctionInstance& instance, const EmpiricalDistribution& dist,
                   int deviation_grid) {
  if (deviation_grid < 2) {
    throw std::invalid_argument("cce_epsilon: deviation grid must have at least 2 bids");
  }
  std::vector<Vector> grids;
  grids.reserve(instance.n());
  for (int i = 0; i < instance.n(); ++i) {
    grids.push_back(uniform_grid(instance.valuations[i], deviation_grid));
  }
  return cce_epsilon(instance, dist, grids);
}

double pota_estimate(const PlayHistory& history) {
  return pota_estimate(history, 0, static_cast<std::int64_t>(history.rounds.size()));
}

double pota_estimate(const PlayHistory& history, std::int64_t begin, std::int64_t end) {
  const auto total = static_cast<std::int64_t>(history.rounds.size());
  if (begin < 0 || end > total || begin >= end) {
    throw std::invalid_argument("pota_estimate: empty or invalid window");
  }
  double sw = 0.0;
  double opt = 0.0;
  for (std::int64_t t = begin; t < end; ++t) {
    sw += history.rounds[t].outcome.welfare;
    opt += history.rounds[t].opt;
  }
  if (sw <= 0.0) {
    return opt > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  }
  return opt / sw;
}

double hedge_regret_bound(const LearnerConfig& config, std::int64_t rounds,
                          double scale) {
  const double log_k = std::log(static_cast<double>(config.grid_size));
  const double t = static_cast<double>(rounds);
  if (config.fixed_eta) {
    return scale * (log_k / *config.fixed_eta + *config.fixed_eta * t / 8.0);
  }
  return scale * (2.0 * std::sqrt(t * log_k / 2.0) + std::sqrt(log_k / 8.0));
}

namespace {

void append_double(std::string& row, double value) {
  char buffer[32];
  const auto res = std::to_chars(buffer, buffer + sizeof(buffer), value);
  row.append(buffer, res.ptr);
}

}  // namespace

void write_trajectory_csv(const PlayHistory& history, std::ostream& out,
                          std::int64_t every) {
  if (every < 1) throw std::invalid_argument("write_trajectory_csv: every must be >= 1");
  out << "round,player,bid,regret,cum_sw,cum_opt,running_pota\n";
  const auto total = static_cast<std::int64_t>(history.rounds.size());
  double cum_sw = 0.0;
  double cum_opt = 0.0;
  for (std::int64_t t = 0; t < total; ++t) {
    const auto& round = history.rounds[t];
    cum_sw += round.outcome.welfare;
    cum_opt += round.opt;
    if ((t + 1) % every != 0 && t + 1 != total) continue;
    const double pota = cum_sw > 0.0 ? cum_opt / cum_sw
                                     : std::numeric_limits<double>::infinity();
    for (int i = 0; i < history.n; ++i) {
      std::string row;
      row += std::to_string(t + 1);
      row += ',';
      row += std::to_string(i + 1);
      row += ',';
      append_double(row, round.bids[i]);
      row += ',';
      append_double(row, history.regret_curves[i][t]);
      row += ',';
      append_double(row, cum_sw);
      row += ',';
      append_double(row, cum_opt);
      row += ',';
      append_double(row, pota);
      row += '\n';
      out << row;
    }
  }
}

std::vector<Vector> read_trajectory_profiles(std::istream& in, int n) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("trajectory: empty file");
  }
  if (line.rfind("round,player,bid", 0) != 0) {
    throw std::invalid_argument("trajectory: unexpected header");
  }
  std::vector<Vector> profiles;
  Vector current = Vector::Zero(n);
  int filled = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string token;
    std::getline(fields, token, ',');  // round
    std::getline(fields, token, ',');  // player
    const int player = std::stoi(token);
    if (player < 1 || player > n) {
      throw std::invalid_argument("trajectory: player column out of range");
    }
    std::getline(fields, token, ',');  // bid
    current[player - 1] = std::stod(token);
    if (++filled == n) {
      profiles.push_back(current);
      filled = 0;
    }
  }
  if (filled != 0) {
    throw std::invalid_argument("trajectory: truncated round (missing player rows)");
  }
  if (profiles.empty()) {
    throw std::invalid_argument("trajectory: no rounds");
  }
  return profiles;
}

}  // namespace gsp
