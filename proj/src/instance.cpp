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

#include "gsp/instance.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gsp/types.hpp"

namespace gsp {

bool is_permutation(const Permutation& perm) {
  const int n = static_cast<int>(perm.size());
  std::vector<bool> seen(n, false);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[p]) return false;
    seen[p] = true;
  }
  return true;
}

Permutation inverse_permutation(const Permutation& perm) {
  Permutation inv(perm.size());
  for (int k = 0; k < static_cast<int>(perm.size()); ++k) inv[perm[k]] = k;
  return inv;
}

Permutation identity_permutation(int n) {
  Permutation perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  return perm;
}

void validate_instance(const AuctionInstance& instance) {
  const int n = instance.n();
  if (n < 1) throw std::invalid_argument("instance: n must be at least 1");
  if (instance.valuations.size() != n || instance.gammas.size() != n) {
    throw std::invalid_argument(
        "instance: alphas, valuations, gammas must have equal length");
  }
  for (int k = 0; k < n; ++k) {
    const double a = instance.alphas[k];
    if (!(a >= 0.0) || !std::isfinite(a)) {
      throw std::invalid_argument("instance: alphas must be finite and non-negative");
    }
    if (k > 0 && instance.alphas[k - 1] < a) {
      throw std::invalid_argument("instance: alphas must be non-increasing");
    }
    if (!(instance.valuations[k] >= 0.0) || !std::isfinite(instance.valuations[k])) {
      throw std::invalid_argument(
          "instance: valuations must be finite and non-negative");
    }
    if (!(instance.gammas[k] > 0.0) || !std::isfinite(instance.gammas[k])) {
      throw std::invalid_argument("instance: gammas must be finite and positive");
    }
  }
}

void validate_bids(const AuctionInstance& instance, const BidProfile& bids) {
  if (bids.bids.size() != instance.n()) {
    throw std::invalid_argument("bids: length must match the number of players");
  }
  for (int i = 0; i < instance.n(); ++i) {
    const double b = bids.bids[i];
    if (!std::isfinite(b) || b < 0.0) {
      throw std::invalid_argument("bids: must be finite and non-negative");
    }
    if (b > instance.valuations[i] + kOverbidTolerance) {
      throw std::invalid_argument("bids: overbidding detected (b_i > v_i)");
    }
  }
}

AuctionInstance make_instance(Vector alphas, Vector valuations) {
  Vector gammas = Vector::Ones(alphas.size());
  return make_instance(std::move(alphas), std::move(valuations), std::move(gammas));
}

AuctionInstance make_instance(Vector alphas, Vector valuations, Vector gammas) {
  AuctionInstance instance{std::move(alphas), std::move(valuations), std::move(gammas)};
  validate_instance(instance);
  return instance;
}

Vector effective_values(const AuctionInstance& instance) {
  return instance.gammas.cwiseProduct(instance.valuations);
}

Vector effective_bids(const AuctionInstance& instance, const BidProfile& bids) {
  return instance.gammas.cwiseProduct(bids.bids);
}

void validate_distribution(const JointDistribution& dist) {
  const int n = dist.n();
  if (n < 1) throw std::invalid_argument("distribution: n must be at least 1");
  if (dist.support.empty()) {
    throw std::invalid_argument("distribution: support must be non-empty");
  }
  double total = 0.0;
  for (const auto& point : dist.support) {
    if (!(point.prob > 0.0)) {
      throw std::invalid_argument("distribution: probabilities must be positive");
    }
    total += point.prob;
    AuctionInstance instance{dist.alphas, point.valuations, point.gammas};
    validate_instance(instance);
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("distribution: probabilities must sum to 1");
  }
}

AuctionInstance instance_at(const JointDistribution& dist, int support_index) {
  if (support_index < 0 || support_index >= static_cast<int>(dist.support.size())) {
    throw std::invalid_argument("distribution: support index out of range");
  }
  const auto& point = dist.support[support_index];
  return AuctionInstance{dist.alphas, point.valuations, point.gammas};
}

std::pair<AuctionInstance, BidProfile> reference_instance(const std::string& name) {
  if (name == "poa2") {
    AuctionInstance instance =
        make_instance((Vector(2) << 1.0, 0.5).finished(), (Vector(2) << 1.0, 0.5).finished());
    BidProfile bids{(Vector(2) << 0.0, 0.5).finished()};
    return {instance, bids};
  }
  if (name == "poa3") {
    AuctionInstance instance = make_instance(
        (Vector(3) << 1.0, 0.55071, 0.4704).finished(),
        (Vector(3) << 1.0, 0.5296, 0.14583).finished());
    BidProfile bids{(Vector(3) << 0.0, 0.5296, 0.14583).finished()};
    return {instance, bids};
  }
  throw std::invalid_argument("unknown reference instance: " + name);
}

}  // namespace gsp
