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

#ifndef GSP_AUCTION_HPP
#define GSP_AUCTION_HPP

#include <vector>

#include "gsp/instance.hpp"
#include "gsp/types.hpp"

namespace gsp {

struct Outcome {
  Permutation slot_to_player;  // slot k -> player
  Permutation player_to_slot;  // player i -> slot
  Vector payments;             // per-click price p_i per player
  Vector utilities;            // alpha_sigma(i) * gamma_i * (v_i - p_i)
  double welfare = 0.0;        // sum_k alpha_k * gamma_pi(k) * v_pi(k)
};

struct OptimalAssignment {
  double value = 0.0;
  Permutation slot_to_player;
};

// Runs the generalized second price auction: slots by descending effective
// bid (ties to the lower player index), critical-value payments with the
// (n+1)-th bid taken as zero. Rejects non-conservative bids.
Outcome run_auction(const AuctionInstance& instance, const BidProfile& bids);

// Welfare of an arbitrary allocation.
double welfare_of(const AuctionInstance& instance, const Permutation& slot_to_player);

// Maximum welfare and an attaining allocation (players sorted by effective
// value, ties to the lower index).
OptimalAssignment optimal_welfare(const AuctionInstance& instance);

// Maximum over allocations of the welfare collected by `subset` only.
// Equals placing the subset, sorted by effective value, into the top slots.
double restricted_optimal_welfare(const AuctionInstance& instance,
                                  const std::vector<int>& subset);

// Utility of `player` when bidding `bid` against the other players' bids.
// The deviating bid may be any non-negative value; the rest of the profile
// must be conservative.
double deviation_utility(const AuctionInstance& instance, const BidProfile& bids,
                         int player, double bid);

}  // namespace gsp

#endif  // GSP_AUCTION_HPP
