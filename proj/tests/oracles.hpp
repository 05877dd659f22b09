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

// Brute-force oracles kept independent of the library's closed-form paths.

#ifndef GSP_TESTS_ORACLES_HPP
#define GSP_TESTS_ORACLES_HPP

#include <algorithm>
#include <vector>

#include "gsp/auction.hpp"
#include "gsp/instance.hpp"
#include "gsp/types.hpp"

namespace gsp::oracle {

// Maximum welfare by full permutation enumeration (n <= 8).
inline double brute_optimal_welfare(const AuctionInstance& instance) {
  Permutation perm = identity_permutation(instance.n());
  double best = 0.0;
  do {
    best = std::max(best, welfare_of(instance, perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Maximum subset welfare by full permutation enumeration.
inline double brute_restricted_optimal(const AuctionInstance& instance,
                                       const std::vector<int>& subset) {
  const Vector ev = effective_values(instance);
  Permutation perm = identity_permutation(instance.n());
  double best = 0.0;
  do {
    const Permutation player_to_slot = inverse_permutation(perm);
    double value = 0.0;
    for (int i : subset) value += instance.alphas[player_to_slot[i]] * ev[i];
    best = std::max(best, value);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Best deviation utility over a uniform bid grid, evaluated through the
// auction simulator.
inline double grid_best_response(const AuctionInstance& instance, const BidProfile& bids,
                                 int player, int grid_points) {
  const double cap = instance.valuations[player];
  double best = 0.0;
  for (int k = 0; k < grid_points; ++k) {
    const double bid = cap * static_cast<double>(k) / (grid_points - 1);
    best = std::max(best, deviation_utility(instance, bids, player, bid));
  }
  return best;
}

}  // namespace gsp::oracle

#endif  // GSP_TESTS_ORACLES_HPP
