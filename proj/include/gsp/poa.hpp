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

#ifndef GSP_POA_HPP
#define GSP_POA_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gsp/instance.hpp"
#include "gsp/types.hpp"

namespace gsp {

// OPT / SW of the given allocation. Conventions: SW = 0 with OPT > 0 yields
// +infinity; SW = OPT = 0 yields 1.
double inefficiency(const AuctionInstance& instance, const Permutation& slot_to_player);

// Proven upper bound on the inefficiency of any weakly feasible allocation:
// (61 + 7*sqrt(217)) / 128, about 1.28216.
double max_weakly_feasible_inefficiency();

// All weakly feasible allocations with their inefficiencies, sorted by
// inefficiency descending. Factorial enumeration; refuses n > 8.
std::vector<std::pair<Permutation, double>> enumerate_weakly_feasible(
    const AuctionInstance& instance);

struct SearchResult {
  double best_ratio = 1.0;
  AuctionInstance witness;
  Permutation witness_allocation;
  std::optional<BidProfile> equilibrium_bids;  // supporting bids, when known
  std::int64_t iterations = 0;
  std::string method;  // "enumeration" | "closed-form" | "numeric-maximization"
  bool bound_violated = false;   // best_ratio above the proven bound
  bool budget_exhausted = false;  // stopped before the refinement settled
  std::map<std::string, double> diagnostics;
};

// Closed-form worst case for two players: maximizes (1 + b*l) / (b + l)
// subject to b >= 1 - l over b, l in [0,1]; the optimum 5/4 is at
// b = l = 1/2.
SearchResult worst_case_n2();

// Closed-form worst case for three players: maximizes
// (l^2 + l + 2 - 2*sqrt(l^3 + 1)) / l over l in (0, 1] and returns the
// bundled three-player witness (ratio within [1.259133, 1.259135]).
// Diagnostics carry the analytic supremum and its maximizer.
SearchResult worst_case_n3();

// Random-restart, per-coordinate golden-section maximization of the
// inefficiency over sorted (alphas, valuations) in [0,1]^{2n} with
// alpha_1 = v_1 = 1 and unit quality factors, rejecting weakly infeasible
// points. When no allocation is given, all irreducible allocations are
// searched (one representative per inverse pair). Deterministic in `seed`;
// `budget` counts objective evaluations.
SearchResult worst_case_numeric(int n, const std::optional<Permutation>& allocation,
                                std::int64_t budget, std::uint64_t seed);

struct CycleBound {
  std::vector<int> slots;  // sorted slot indices of the cycle
  AuctionInstance subgame;
  Permutation sub_allocation;
  double ratio = 1.0;
};

struct ReductionResult {
  std::vector<CycleBound> cycles;
  double overall_ratio = 1.0;
  double max_cycle_ratio = 1.0;
};

// Splits a weakly feasible allocation into its cycle subgames and bounds the
// overall inefficiency by the worst cycle.
ReductionResult reduce_and_bound(const AuctionInstance& instance,
                                 const Permutation& slot_to_player);

// The value/CTR swap: a new game with alpha'_i = v_i, v'_i = alpha_i and the
// inverse allocation. Preserves OPT, SW, and weak feasibility.
std::pair<AuctionInstance, Permutation> dual_game(const AuctionInstance& instance,
                                                  const Permutation& slot_to_player);

}  // namespace gsp

#endif  // GSP_POA_HPP
