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

#ifndef GSP_EQUILIBRIA_HPP
#define GSP_EQUILIBRIA_HPP

#include <optional>
#include <utility>
#include <vector>

#include "gsp/auction.hpp"
#include "gsp/instance.hpp"
#include "gsp/types.hpp"

namespace gsp {

// Exact supremal deviation utility over all conservative bids, found by slot
// enumeration (utility is piecewise constant in the own bid, with breakpoints
// at the opponents' effective bids).
struct BestResponse {
  double utility = 0.0;
  int target_slot = 0;  // 0-based slot achieving the supremum
  double bid = 0.0;     // witness bid attaining (or approaching) it
};

BestResponse best_response(const AuctionInstance& instance, const BidProfile& bids,
                           int player);

struct EquilibriumReport {
  Vector per_player_regret;  // best deviation minus current utility, floored at 0
  double max_regret = 0.0;   // over the checked players
  bool is_equilibrium = false;
  double tolerance = kDefaultTolerance;
  std::vector<int> players_checked;
  std::vector<BestResponse> witnesses;  // aligned with players_checked
};

// Pure Nash check: every player's regret at most `tolerance`.
EquilibriumReport verify_pure_ne(const AuctionInstance& instance, const BidProfile& bids,
                                 double tolerance = kDefaultTolerance);

// Multiplicative approximate equilibrium: u_i >= (1 - epsilon) * best_i.
EquilibriumReport verify_epsilon_ne(const AuctionInstance& instance,
                                    const BidProfile& bids, double epsilon);

// Nash check restricted to the players in `subset`; the remaining players'
// bids are taken as given (still conservative).
EquilibriumReport verify_s_ne(const AuctionInstance& instance, const BidProfile& bids,
                              const std::vector<int>& subset,
                              double tolerance = kDefaultTolerance);

struct WeakFeasibilityResult {
  bool holds = false;
  // Slot pairs (i, j), 0-based after sorting players by effective value,
  // where alpha_j/alpha_i + ev_{pi(i)}/ev_{pi(j)} < 1 - tolerance.
  std::vector<std::pair<int, int>> violations;
};

// Checks the slot-pair inequality for every ordered pair. Players are
// relabeled internally by descending effective value (ties to the lower
// index). Ratio conventions: x/0 with x > 0 counts as +infinity, 0/0 as 0.
WeakFeasibilityResult weak_feasibility(const AuctionInstance& instance,
                                       const Permutation& slot_to_player,
                                       double tolerance = kDefaultTolerance);

struct AllocationStructure {
  Permutation slot_to_player;           // in the sorted labeling
  std::vector<std::vector<int>> cycles;  // cycle decomposition over slots
  bool is_irreducible = false;           // exactly one cycle
  bool is_proper = false;                // index order kept among equal-CTR slots
};

// Cycle decomposition of the slot graph where slot s points to the slot
// assigned to player s (players relabeled by descending effective value).
AllocationStructure allocation_structure(const AuctionInstance& instance,
                                         const Permutation& slot_to_player);

// Asynchronous best-response dynamics from the truthful profile. Returns a
// profile passing verify_pure_ne at `tolerance`, or nullopt if the dynamics
// did not settle within `max_iterations`.
std::optional<BidProfile> find_pure_ne_by_best_response(
    const AuctionInstance& instance, int max_iterations = 2000,
    double tolerance = kDefaultTolerance);

}  // namespace gsp

#endif  // GSP_EQUILIBRIA_HPP
