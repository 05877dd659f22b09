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

#include "gsp/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gsp {

namespace {

// Opponents' effective bids sorted descending, with a trailing zero, so that
// entry k is the price (in effective-bid units) of occupying slot k.
std::vector<double> opponent_thresholds(const AuctionInstance& instance,
                                        const BidProfile& bids, int player) {
  std::vector<double> thresholds;
  thresholds.reserve(instance.n());
  for (int j = 0; j < instance.n(); ++j) {
    if (j == player) continue;
    thresholds.push_back(instance.gammas[j] * bids.bids[j]);
  }
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.push_back(0.0);
  return thresholds;
}

// Players ranked by effective value descending, ties to the lower index.
Permutation value_order(const AuctionInstance& instance) {
  const Vector ev = effective_values(instance);
  Permutation order = identity_permutation(instance.n());
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (ev[a] != ev[b]) return ev[a] > ev[b];
    return a < b;
  });
  return order;
}

}  // namespace

BestResponse best_response(const AuctionInstance& instance, const BidProfile& bids,
                           int player) {
  validate_instance(instance);
  validate_bids(instance, bids);
  if (player < 0 || player >= instance.n()) {
    throw std::invalid_argument("best_response: player index out of range");
  }
  const double own_value = instance.gammas[player] * instance.valuations[player];
  const std::vector<double> thresholds = opponent_thresholds(instance, bids, player);

  BestResponse best;
  best.utility = -std::numeric_limits<double>::infinity();
  // Worst slot first, so ties resolve to the cheaper target.
  for (int k = instance.n() - 1; k >= 0; --k) {
    if (own_value < thresholds[k]) continue;  // slot unaffordable
    const double value = instance.alphas[k] * (own_value - thresholds[k]);
    if (value > best.utility) {
      best.utility = value;
      best.target_slot = k;
    }
  }

  // Witness: the threshold itself when the tie-break lets the player keep the
  // slot at that bid, otherwise the smallest representable bid whose effective
  // bid clears the threshold, capped at v_i. A single nextafter step on the
  // bid is not enough: multiplying by gamma can round back onto the tie.
  const double cap = instance.valuations[player];
  const double gamma = instance.gammas[player];
  const double threshold = thresholds[best.target_slot];
  best.bid = std::min(threshold / gamma, cap);
  const double slack = 1e-12 * std::max(1.0, best.utility);
  if (deviation_utility(instance, bids, player, best.bid) < best.utility - slack) {
    double bid = best.bid;
    while (bid < cap && gamma * bid <= threshold) {
      bid = std::nextafter(bid, std::numeric_limits<double>::max());
    }
    best.bid = std::min(bid, cap);
  }
  return best;
}

namespace {

EquilibriumReport build_report(const AuctionInstance& instance, const BidProfile& bids,
                               const std::vector<int>& players, double slack_factor,
                               double tolerance) {
  const Outcome outcome = run_auction(instance, bids);
  EquilibriumReport report;
  report.per_player_regret = Vector::Zero(instance.n());
  report.tolerance = tolerance;
  report.players_checked = players;
  report.max_regret = 0.0;
  for (int i : players) {
    const BestResponse br = best_response(instance, bids, i);
    const double regret =
        std::max(0.0, slack_factor * br.utility - outcome.utilities[i]);
    report.per_player_regret[i] = regret;
    report.max_regret = std::max(report.max_regret, regret);
    report.witnesses.push_back(br);
  }
  report.is_equilibrium = report.max_regret <= tolerance;
  return report;
}

}  // namespace

EquilibriumReport verify_pure_ne(const AuctionInstance& instance, const BidProfile& bids,
                                 double tolerance) {
  std::vector<int> all(instance.n());
  for (int i = 0; i < instance.n(); ++i) all[i] = i;
  return build_report(instance, bids, all, 1.0, tolerance);
}

EquilibriumReport verify_epsilon_ne(const AuctionInstance& instance,
                                    const BidProfile& bids, double epsilon) {
  if (!(epsilon >= 0.0) || epsilon >= 1.0) {
    throw std::invalid_argument("verify_epsilon_ne: epsilon must be in [0, 1)");
  }
  std::vector<int> all(instance.n());
  for (int i = 0; i < instance.n(); ++i) all[i] = i;
  return build_report(instance, bids, all, 1.0 - epsilon, kDefaultTolerance);
}

EquilibriumReport verify_s_ne(const AuctionInstance& instance, const BidProfile& bids,
                              const std::vector<int>& subset, double tolerance) {
  if (subset.empty()) throw std::invalid_argument("verify_s_ne: empty subset");
  std::vector<int> players = subset;
  std::sort(players.begin(), players.end());
  for (std::size_t k = 0; k < players.size(); ++k) {
    if (players[k] < 0 || players[k] >= instance.n()) {
      throw std::invalid_argument("verify_s_ne: player out of range");
    }
    if (k > 0 && players[k] == players[k - 1]) {
      throw std::invalid_argument("verify_s_ne: duplicate player");
    }
  }
  return build_report(instance, bids, players, 1.0, tolerance);
}

WeakFeasibilityResult weak_feasibility(const AuctionInstance& instance,
                                       const Permutation& slot_to_player,
                                       double tolerance) {
  validate_instance(instance);
  if (static_cast<int>(slot_to_player.size()) != instance.n() ||
      !is_permutation(slot_to_player)) {
    throw std::invalid_argument("weak_feasibility: not a permutation of the players");
  }
  const Vector ev = effective_values(instance);
  const int n = instance.n();

  // x/0 with x > 0 counts as +infinity (condition met), 0/0 as 0.
  const auto ratio = [](double num, double den) {
    if (den > 0.0) return num / den;
    return num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  };

  WeakFeasibilityResult result;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double lhs = ratio(instance.alphas[j], instance.alphas[i]) +
                         ratio(ev[slot_to_player[i]], ev[slot_to_player[j]]);
      if (!(lhs >= 1.0 - tolerance)) {
        result.violations.emplace_back(i, j);
      }
    }
  }
  result.holds = result.violations.empty();
  return result;
}

AllocationStructure allocation_structure(const AuctionInstance& instance,
                                         const Permutation& slot_to_player) {
  validate_instance(instance);
  if (static_cast<int>(slot_to_player.size()) != instance.n() ||
      !is_permutation(slot_to_player)) {
    throw std::invalid_argument("allocation_structure: not a permutation");
  }
  const int n = instance.n();

  // Relabel players by descending effective value so player k pairs with
  // slot k, as the slot graph requires.
  const Permutation order = value_order(instance);
  Permutation rank(n);
  for (int k = 0; k < n; ++k) rank[order[k]] = k;

  AllocationStructure structure;
  structure.slot_to_player.resize(n);
  for (int s = 0; s < n; ++s) structure.slot_to_player[s] = rank[slot_to_player[s]];
  const Permutation player_to_slot = inverse_permutation(structure.slot_to_player);

  // Slot s points to the slot of (relabeled) player s.
  std::vector<bool> seen(n, false);
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<int> cycle;
    int cur = s;
    while (!seen[cur]) {
      seen[cur] = true;
      cycle.push_back(cur);
      cur = player_to_slot[cur];
    }
    structure.cycles.push_back(std::move(cycle));
  }
  structure.is_irreducible = structure.cycles.size() == 1;

  structure.is_proper = true;
  for (int i = 0; i + 1 < n && structure.is_proper; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (instance.alphas[i] == instance.alphas[j] &&
          structure.slot_to_player[i] > structure.slot_to_player[j]) {
        structure.is_proper = false;
        break;
      }
    }
  }
  return structure;
}

std::optional<BidProfile> find_pure_ne_by_best_response(
    const AuctionInstance& instance, int max_iterations, double tolerance) {
  validate_instance(instance);
  const int n = instance.n();
  BidProfile bids{instance.valuations};

  for (int iter = 0; iter < max_iterations; ++iter) {
    const Outcome outcome = run_auction(instance, bids);
    double worst = 0.0;
    int worst_player = -1;
    BestResponse worst_br;
    for (int i = 0; i < n; ++i) {
      const BestResponse br = best_response(instance, bids, i);
      const double regret = br.utility - outcome.utilities[i];
      if (regret > worst) {
        worst = regret;
        worst_player = i;
        worst_br = br;
      }
    }
    if (worst_player < 0 || worst <= 1e-13) {
      const auto report = verify_pure_ne(instance, bids, tolerance);
      if (report.is_equilibrium) return bids;
      return std::nullopt;
    }

    // Rebid into the middle of the winning window of the target slot, which
    // attains the best-response value and is less knife-edged than the
    // threshold itself.
    const int k = worst_br.target_slot;
    const std::vector<double> thresholds =
        opponent_thresholds(instance, bids, worst_player);
    const double own_value =
        instance.gammas[worst_player] * instance.valuations[worst_player];
    const double lo = thresholds[k];
    const double hi = std::min(k > 0 ? thresholds[k - 1] : own_value, own_value);
    const double eff = lo + 0.5 * (std::max(hi, lo) - lo);
    bids.bids[worst_player] = std::clamp(eff / instance.gammas[worst_player], 0.0,
                                         instance.valuations[worst_player]);
  }
  return std::nullopt;
}

}  // namespace gsp
