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

#ifndef GSP_INSTANCE_HPP
#define GSP_INSTANCE_HPP

#include <string>
#include <utility>
#include <vector>

#include "gsp/types.hpp"

namespace gsp {

// One auction with as many slots as players. Click-through rates are
// non-increasing, quality factors strictly positive, valuations non-negative.
struct AuctionInstance {
  Vector alphas;      // per-slot click-through rates, non-increasing
  Vector valuations;  // per-player value per click
  Vector gammas;      // per-player quality factor

  int n() const { return static_cast<int>(alphas.size()); }
};

// One conservative bid per player (0 <= b_i <= v_i).
struct BidProfile {
  Vector bids;
};

// Finite-support joint distribution over (valuations, gammas) profiles.
// Click-through rates are shared across the support.
struct JointDistribution {
  struct SupportPoint {
    double prob;
    Vector valuations;
    Vector gammas;
  };

  Vector alphas;
  std::vector<SupportPoint> support;

  int n() const { return static_cast<int>(alphas.size()); }
};

// Throw std::invalid_argument naming the violated invariant.
void validate_instance(const AuctionInstance& instance);
void validate_bids(const AuctionInstance& instance, const BidProfile& bids);
void validate_distribution(const JointDistribution& dist);

AuctionInstance make_instance(Vector alphas, Vector valuations);
AuctionInstance make_instance(Vector alphas, Vector valuations, Vector gammas);

// Effective value gamma_i * v_i per player.
Vector effective_values(const AuctionInstance& instance);
// Effective bid gamma_i * b_i per player.
Vector effective_bids(const AuctionInstance& instance, const BidProfile& bids);

// The auction induced by one support point of a distribution.
AuctionInstance instance_at(const JointDistribution& dist, int support_index);

// Bundled reference instances with their known equilibrium bids.
// Names: "poa2" (two players, inefficiency 5/4) and "poa3" (three players,
// inefficiency ~1.2591334). Throws std::invalid_argument for unknown names.
std::pair<AuctionInstance, BidProfile> reference_instance(const std::string& name);

}  // namespace gsp

#endif  // GSP_INSTANCE_HPP
