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

#ifndef GSP_BOUNDS_HPP
#define GSP_BOUNDS_HPP

#include <string>
#include <vector>

#include "gsp/instance.hpp"
#include "gsp/types.hpp"

namespace gsp {

// Exact expectation of the deviator's utility when her bid is drawn from the
// density f(y) = 1/(v_i - y) on [0, v_i*(1 - 1/e)], zero elsewhere, against
// the fixed opponent bids. Computed by partitioning the support at the
// opponents' effective-bid thresholds: the attained slot (and so the utility)
// is constant on each piece, whose mass is log((v-a)/(v-b)). No sampling.
double expected_deviation_utility(const AuctionInstance& instance,
                                  const BidProfile& bids, int player);

// The one-slot lower bound behind the randomized deviation: the deviator
// targets `target_slot`, wins it whenever her drawn effective bid clears the
// occupant threshold, and is charged her own bid. Evaluates to
// alpha_k * gamma_i * (v_i*(1 - 1/e) - threshold/gamma_i)^+ in closed form.
double deviation_value_lower_bound(const AuctionInstance& instance,
                                   const BidProfile& bids, int player,
                                   int target_slot);

// Margin of sum_i E[u_i(b'_i, b_-i)] >= (1 - 1/e)*OPT - SW for the randomized
// deviation above. Non-negative (up to tolerance) for every conservative
// profile.
double check_semi_smooth(const AuctionInstance& instance, const BidProfile& bids);

// Margin of the coarser deterministic variant b'_i = v_i / 2:
// sum_i u_i(v_i/2, b_-i) >= OPT/2 - SW.
double check_semi_smooth_half(const AuctionInstance& instance, const BidProfile& bids);

// Witness that no (lambda, mu) makes the pairwise smoothness inequality
// sum_i u_i(s*_i, s_-i) >= lambda*SW(s*) - mu*SW(s) hold: a two-player game
// with small equal CTR ratio and valuation where it fails by `violation`.
struct SmoothnessWitness {
  AuctionInstance instance;
  BidProfile profile;       // s
  BidProfile comparison;    // s*
  double violation = 0.0;   // lambda*SW(s*) - mu*SW(s) - sum_i u_i(s*_i, s_-i) > 0
};

SmoothnessWitness smoothness_counterexample(double lambda, double mu);

// Piecewise deviation density for the Bayesian bound:
//   kappa/(1-y)                 on [0, lambda)
//   (kappa-1)(1-mu)/(1-y)^2     on [lambda, mu)
//   0                           on [mu, 1]
struct BoundedFnSpec {
  double kappa = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
};

double bounded_g(const BoundedFnSpec& spec, double y);
double bounded_g_mass(const BoundedFnSpec& spec);            // int_0^1 g
double bounded_g_tail(const BoundedFnSpec& spec, double z);  // int_z^1 g
double bounded_g_linear_tail(const BoundedFnSpec& spec, double z);  // int_z^1 (1-y) g

// Full-information deviation density 1/((1-lambda)(1-y)) on [0, lambda].
double cor_bounded_g(double lambda, double y);
double cor_bounded_g_mass(double lambda);
double cor_bounded_g_linear_tail(double lambda, double z);

struct CheckEntry {
  std::string name;
  double worst_margin = 0.0;  // pass iff worst_margin >= -tolerance
  double worst_at = 0.0;      // grid point achieving the worst margin
  double tolerance = 0.0;
  bool pass = false;
};

struct CertificateReport {
  std::string title;
  std::vector<CheckEntry> checks;
  int grid_size = 0;
  double tolerance = 0.0;

  bool pass() const;
  std::string to_text() const;
};

// Certifies that g is ((kappa-1)*mu, kappa-1)-bounded: unit mass, the two
// tail inequalities on a z-grid plus the analytic breakpoints, and the two
// parameter side conditions.
CertificateReport verify_bounded_function(const BoundedFnSpec& spec,
                                          int grid_size = 2000,
                                          double tolerance = 1e-9);

// Certifies the full-information variant g(y) = 1/((1-lambda)(1-y)) on
// [0, lambda]: mass at most one and int_z^1 (1-y) g >= beta - (1+beta) z with
// beta = lambda/(1-lambda).
CertificateReport verify_cor_bounded_function(double lambda, int grid_size = 2000,
                                              double tolerance = 1e-9);

// Root of 1 - lambda + ln(1 - lambda) = 0 in (0, 1), by bisection to 1e-12.
double solve_lambda_root();

// Certifies the two polynomial facts behind the 1.28216 and 1.259134 bounds:
// the constrained 4-variable program is non-negative, the cubic g is
// non-negative on [0,1] with a root at its interior minimizer, and the
// zeta-shifted square-root inequality holds on [0,1].
CertificateReport verify_technical_lemmas(double tolerance = 1e-7);

struct ConstantRow {
  std::string name;
  double computed = 0.0;
  double reference = 0.0;
  double diff = 0.0;
};

// Every headline constant recomputed from first principles next to its
// published value.
std::vector<ConstantRow> theoretical_constants();

// Approximate-equilibrium efficiency bound ((1-eps)^{-1} + delta) / beta as a
// function of the multiplicative slack eps.
double approx_equilibrium_poa(double epsilon);

}  // namespace gsp

#endif  // GSP_BOUNDS_HPP
