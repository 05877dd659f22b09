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

#include "gsp/auction.hpp"

#include <algorithm>
#include <stdexcept>

namespace gsp {

namespace {

// Players ordered by effective bid descending, ties to the lower index.
Permutation allocation_order(const Vector& effective) {
  Permutation order = identity_permutation(static_cast<int>(effective.size()));
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (effective[a] != effective[b]) return effective[a] > effective[b];
    return a < b;
  });
  return order;
}

}  // namespace

Outcome run_auction(const AuctionInstance& instance, const BidProfile& bids) {
  validate_instance(instance);
  validate_bids(instance, bids);
  const int n = instance.n();
  const Vector eff = effective_bids(instance, bids);

  Outcome outcome;
  outcome.slot_to_player = allocation_order(eff);
  outcome.player_to_slot = inverse_permutation(outcome.slot_to_player);
  outcome.payments = Vector::Zero(n);
  outcome.utilities = Vector::Zero(n);

  for (int k = 0; k < n; ++k) {
    const int player = outcome.slot_to_player[k];
    const double next_eff = (k + 1 < n) ? eff[outcome.slot_to_player[k + 1]] : 0.0;
    outcome.payments[player] = next_eff / instance.gammas[player];
    outcome.utilities[player] =
        instance.alphas[k] *
        (instance.gammas[player] * instance.valuations[player] - next_eff);
  }
  outcome.welfare = welfare_of(instance, outcome.slot_to_player);
  return outcome;
}

double welfare_of(const AuctionInstance& instance, const Permutation& slot_to_player) {
  if (static_cast<int>(slot_to_player.size()) != instance.n() ||
      !is_permutation(slot_to_player)) {
    throw std::invalid_argument("welfare_of: not a permutation of the players");
  }
  const Vector ev = effective_values(instance);
  double welfare = 0.0;
  for (int k = 0; k < instance.n(); ++k) {
    welfare += instance.alphas[k] * ev[slot_to_player[k]];
  }
  return welfare;
}

OptimalAssignment optimal_welfare(const AuctionInstance& instance) {
  validate_instance(instance);
  const Vector ev = effective_values(instance);
  OptimalAssignment opt;
  opt.slot_to_player = allocation_order(ev);
  opt.value = welfare_of(instance, opt.slot_to_player);
  return opt;
}

double restricted_optimal_welfare(const AuctionInstance& instance,
                                  const std::vector<int>& subset) {
  validate_instance(instance);
  if (subset.empty()) {
    throw std::invalid_argument("restricted_optimal_welfare: empty subset");
  }
  std::vector<bool> seen(instance.n(), false);
  for (int i : subset) {
    if (i < 0 || i >= instance.n()) {
      throw std::invalid_argument("restricted_optimal_welfare: player out of range");
    }
    if (seen[i]) {
      throw std::invalid_argument("restricted_optimal_welfare: duplicate player");
    }
    seen[i] = true;
  }
  const Vector ev = effective_values(instance);
  std::vector<double> values;
  values.reserve(subset.size());
  for (int i : subset) values.push_back(ev[i]);
  std::sort(values.begin(), values.end(), std::greater<>());
  double total = 0.0;
  for (int k = 0; k < static_cast<int>(values.size()); ++k) {
    total += instance.alphas[k] * values[k];
  }
  return total;
}

double deviation_utility(const AuctionInstance& instance, const BidProfile& bids,
                         int player, double bid) {
  const int n = instance.n();
  if (player < 0 || player >= n) {
    throw std::invalid_argument("deviation_utility: player index out of range");
  }
  const double own_eff = instance.gammas[player] * bid;
  const double own_value = instance.gammas[player] * instance.valuations[player];

  // Slot reached and the effective bid directly below, without materializing
  // the whole outcome.
  int slot = 0;
  double below = 0.0;  // highest losing effective bid
  for (int j = 0; j < n; ++j) {
    if (j == player) continue;
    const double e = instance.gammas[j] * bids.bids[j];
    const bool above = e > own_eff || (e == own_eff && j < player);
    if (above) {
      ++slot;
    } else {
      below = std::max(below, e);
    }
  }
  return instance.alphas[slot] * (own_value - below);
}

}  // namespace gsp
