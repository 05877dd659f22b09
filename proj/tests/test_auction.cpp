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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "gsp/auction.hpp"
#include "gsp/instance.hpp"
#include "gsp/random.hpp"
#include "oracles.hpp"

using namespace gsp;

TEST_CASE("two-player equilibrium outcome") {
  const auto [instance, bids] = reference_instance("poa2");
  const Outcome outcome = run_auction(instance, bids);
  CHECK(outcome.slot_to_player == Permutation{1, 0});
  CHECK(outcome.payments[0] == doctest::Approx(0.0));
  CHECK(outcome.payments[1] == doctest::Approx(0.0));
  CHECK(outcome.welfare == doctest::Approx(1.0));
  CHECK(outcome.utilities[0] == doctest::Approx(0.5));
  CHECK(outcome.utilities[1] == doctest::Approx(0.5));
}

TEST_CASE("zero bids allocate by index with zero payments") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const AuctionInstance instance = random_instance(rng, 2 + trial % 5, {});
    const BidProfile bids{Vector::Zero(instance.n())};
    const Outcome outcome = run_auction(instance, bids);
    CHECK(outcome.slot_to_player == identity_permutation(instance.n()));
    CHECK(outcome.payments.cwiseAbs().maxCoeff() == 0.0);
    for (int k = 0; k < instance.n(); ++k) {
      CHECK(outcome.utilities[k] ==
            doctest::Approx(instance.alphas[k] * instance.gammas[k] *
                            instance.valuations[k]));
    }
  }
}

TEST_CASE("three-player equilibrium welfare") {
  const auto [instance, bids] = reference_instance("poa3");
  const Outcome outcome = run_auction(instance, bids);
  CHECK(outcome.slot_to_player == Permutation{1, 2, 0});
  // alpha_1 v_2 + alpha_2 v_3 + alpha_3 v_1
  CHECK(outcome.welfare == doctest::Approx(1.0803100393).epsilon(1e-10));
}

TEST_CASE("overbidding and dimension mismatch are rejected") {
  const auto [instance, bids] = reference_instance("poa2");
  CHECK_THROWS_AS(run_auction(instance, BidProfile{(Vector(2) << 0.0, 0.5 + 1e-9).finished()}),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_auction(instance, BidProfile{Vector::Zero(3)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_auction(instance, BidProfile{(Vector(2) << -0.1, 0.0).finished()}),
                  std::invalid_argument);
  // Within the overbid tolerance is accepted.
  CHECK_NOTHROW(run_auction(instance, BidProfile{(Vector(2) << 0.0, 0.5 + 1e-13).finished()}));
}

TEST_CASE("instance invariants are enforced") {
  CHECK_THROWS_AS(make_instance((Vector(2) << 0.5, 1.0).finished(), Vector::Ones(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_instance(Vector::Ones(2), (Vector(2) << 1.0, -0.5).finished()),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_instance(Vector::Ones(2), Vector::Ones(2),
                                (Vector(2) << 1.0, 0.0).finished()),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_instance(Vector::Zero(0), Vector::Zero(0)),
                  std::invalid_argument);
}

TEST_CASE("optimal welfare of the reference instances") {
  const auto poa2 = reference_instance("poa2").first;
  CHECK(optimal_welfare(poa2).value == doctest::Approx(1.25));
  const auto poa3 = reference_instance("poa3").first;
  CHECK(optimal_welfare(poa3).value == doctest::Approx(1.360254448).epsilon(1e-10));
}

TEST_CASE("equal valuations make every gamma-sorted allocation optimal") {
  const AuctionInstance instance = make_instance(
      (Vector(3) << 1.0, 0.7, 0.2).finished(), (Vector(3) << 0.4, 0.4, 0.4).finished());
  const auto opt = optimal_welfare(instance);
  Permutation perm = identity_permutation(3);
  do {
    CHECK(welfare_of(instance, perm) == doctest::Approx(opt.value));
  } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST_CASE("optimal welfare matches enumeration and dominates every allocation") {
  Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    InstanceModel model;
    model.random_gammas = trial % 2 == 0;
    const AuctionInstance instance = random_instance(rng, 2 + trial % 6, model);
    const auto opt = optimal_welfare(instance);
    CHECK(opt.value == doctest::Approx(oracle::brute_optimal_welfare(instance))
                           .epsilon(1e-12));
    Permutation perm = identity_permutation(instance.n());
    do {
      CHECK(welfare_of(instance, perm) <= opt.value + 1e-9);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

TEST_CASE("restricted optimal welfare") {
  const auto poa3 = reference_instance("poa3").first;
  SUBCASE("full set equals the optimum") {
    CHECK(restricted_optimal_welfare(poa3, {0, 1, 2}) ==
          doctest::Approx(optimal_welfare(poa3).value));
  }
  SUBCASE("singleton takes the top slot") {
    CHECK(restricted_optimal_welfare(poa3, {0}) == doctest::Approx(1.0));
  }
  SUBCASE("pair drops to the top two slots") {
    // alpha_1 v_2 + alpha_2 v_3, by enumeration over all 6 allocations
    CHECK(restricted_optimal_welfare(poa3, {1, 2}) ==
          doctest::Approx(0.6099100393).epsilon(1e-10));
    CHECK(restricted_optimal_welfare(poa3, {1, 2}) ==
          doctest::Approx(oracle::brute_restricted_optimal(poa3, {1, 2})));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(restricted_optimal_welfare(poa3, {}), std::invalid_argument);
    CHECK_THROWS_AS(restricted_optimal_welfare(poa3, {3}), std::invalid_argument);
    CHECK_THROWS_AS(restricted_optimal_welfare(poa3, {1, 1}), std::invalid_argument);
  }
  SUBCASE("random subsets match enumeration") {
    Rng rng(13);
    for (int trial = 0; trial < 40; ++trial) {
      const AuctionInstance instance = random_instance(rng, 2 + trial % 5, {});
      std::vector<int> subset;
      for (int i = 0; i < instance.n(); ++i) {
        if (rng.uniform() < 0.5) subset.push_back(i);
      }
      if (subset.empty()) subset.push_back(0);
      CHECK(restricted_optimal_welfare(instance, subset) ==
            doctest::Approx(oracle::brute_restricted_optimal(instance, subset))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("payment dominance and welfare decomposition") {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    InstanceModel model;
    model.random_gammas = trial % 3 == 0;
    const AuctionInstance instance = random_instance(rng, 1 + trial % 6, model);
    const BidProfile bids = random_conservative_bids(rng, instance);
    const Outcome outcome = run_auction(instance, bids);

    double payments_total = 0.0;
    for (int i = 0; i < instance.n(); ++i) {
      const double eff_payment = instance.gammas[i] * outcome.payments[i];
      const double eff_bid = instance.gammas[i] * bids.bids[i];
      const double eff_value = instance.gammas[i] * instance.valuations[i];
      CHECK(eff_payment >= -1e-12);
      CHECK(eff_payment <= eff_bid + 1e-12);
      CHECK(eff_bid <= eff_value + 1e-9);
      CHECK(outcome.utilities[i] >= -1e-12);
      payments_total +=
          instance.alphas[outcome.player_to_slot[i]] * eff_payment;
    }
    const double recomposed = outcome.utilities.sum() + payments_total;
    CHECK(recomposed == doctest::Approx(outcome.welfare).epsilon(1e-9));
  }
}

TEST_CASE("allocation equals the effective-bid comparator sort") {
  Rng rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    InstanceModel model;
    model.random_gammas = true;
    const AuctionInstance instance = random_instance(rng, 1 + trial % 7, model);
    BidProfile bids = random_conservative_bids(rng, instance);
    if (trial % 4 == 0) {
      // Force ties.
      for (int i = 1; i < instance.n(); i += 2) {
        bids.bids[i] = std::min(bids.bids[i - 1] * instance.gammas[i - 1] /
                                    instance.gammas[i],
                                instance.valuations[i]);
      }
    }
    const Outcome outcome = run_auction(instance, bids);
    const Vector eff = effective_bids(instance, bids);
    Permutation expected = identity_permutation(instance.n());
    std::sort(expected.begin(), expected.end(), [&](int a, int b) {
      if (eff[a] != eff[b]) return eff[a] > eff[b];
      return a < b;
    });
    CHECK(outcome.slot_to_player == expected);
  }
}

TEST_CASE("deviation utility agrees with a full re-run of the auction") {
  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const AuctionInstance instance = random_instance(rng, 2 + trial % 5, {});
    const BidProfile bids = random_conservative_bids(rng, instance);
    const int player = static_cast<int>(rng.index(instance.n()));
    const double bid = rng.uniform() * instance.valuations[player];
    BidProfile deviated = bids;
    deviated.bids[player] = bid;
    const Outcome outcome = run_auction(instance, deviated);
    CHECK(deviation_utility(instance, bids, player, bid) ==
          doctest::Approx(outcome.utilities[player]).epsilon(1e-12));
  }
}
