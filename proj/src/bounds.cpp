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

#include "gsp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "gsp/auction.hpp"
#include "gsp/poa.hpp"

namespace gsp {

namespace {

constexpr double kOneMinusInvE = 1.0 - 1.0 / 2.718281828459045235360287471352662498;

void validate_bounded_spec(const BoundedFnSpec& spec) {
  if (!(spec.kappa > 1.0)) {
    throw std::invalid_argument("bounded function: kappa must exceed 1");
  }
  if (!(spec.lambda >= 0.0 && spec.lambda <= spec.mu && spec.mu < 1.0)) {
    throw std::invalid_argument(
        "bounded function: need 0 <= lambda <= mu < 1");
  }
}

}  // namespace

double expected_deviation_utility(const AuctionInstance& instance,
                                  const BidProfile& bids, int player) {
  validate_instance(instance);
  validate_bids(instance, bids);
  if (player < 0 || player >= instance.n()) {
    throw std::invalid_argument("expected_deviation_utility: player out of range");
  }
  const double value = instance.valuations[player];
  const double gamma = instance.gammas[player];
  if (value <= 0.0) return 0.0;
  const double y_max = value * kOneMinusInvE;

  // The attained slot is constant between consecutive opponent thresholds, so
  // the expectation is a sum of piece utilities weighted by the density mass
  // log((v-a)/(v-b)).
  std::vector<double> cuts{0.0, y_max};
  for (int j = 0; j < instance.n(); ++j) {
    if (j == player) continue;
    const double t = instance.gammas[j] * bids.bids[j] / gamma;
    if (t > 0.0 && t < y_max) cuts.push_back(t);
  }
  std::sort(cuts.begin(), cuts.end());

  double expectation = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k];
    const double b = cuts[k + 1];
    if (!(b > a)) continue;
    const double utility = deviation_utility(instance, bids, player, 0.5 * (a + b));
    expectation += utility * std::log((value - a) / (value - b));
  }
  return expectation;
}

double deviation_value_lower_bound(const AuctionInstance& instance,
                                   const BidProfile& bids, int player,
                                   int target_slot) {
  validate_instance(instance);
  validate_bids(instance, bids);
  if (player < 0 || player >= instance.n() || target_slot < 0 ||
      target_slot >= instance.n()) {
    throw std::invalid_argument("deviation_value_lower_bound: index out of range");
  }
  const Outcome outcome = run_auction(instance, bids);
  const int occupant = outcome.slot_to_player[target_slot];
  const double threshold = instance.gammas[occupant] * bids.bids[occupant];
  const double own = instance.gammas[player] * instance.valuations[player];
  return instance.alphas[target_slot] * std::max(0.0, own * kOneMinusInvE - threshold);
}

double check_semi_smooth(const AuctionInstance& instance, const BidProfile& bids) {
  const Outcome outcome = run_auction(instance, bids);
  const double opt = optimal_welfare(instance).value;
  double deviation_total = 0.0;
  for (int i = 0; i < instance.n(); ++i) {
    deviation_total += expected_deviation_utility(instance, bids, i);
  }
  return deviation_total - (kOneMinusInvE * opt - outcome.welfare);
}

double check_semi_smooth_half(const AuctionInstance& instance, const BidProfile& bids) {
  const Outcome outcome = run_auction(instance, bids);
  const double opt = optimal_welfare(instance).value;
  double deviation_total = 0.0;
  for (int i = 0; i < instance.n(); ++i) {
    deviation_total +=
        deviation_utility(instance, bids, i, 0.5 * instance.valuations[i]);
  }
  return deviation_total - (0.5 * opt - outcome.welfare);
}

SmoothnessWitness smoothness_counterexample(double lambda, double mu) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument(
        "smoothness_counterexample: lambda must be positive (every game is "
        "(0, mu)-smooth)");
  }
  if (!(mu >= 0.0)) {
    throw std::invalid_argument("smoothness_counterexample: mu must be non-negative");
  }
  const double v = std::min(0.9, lambda / (8.0 * (1.0 + mu)));

  SmoothnessWitness witness;
  witness.instance = make_instance((Vector(2) << 1.0, v).finished(),
                                   (Vector(2) << 1.0, v).finished());
  witness.profile = BidProfile{(Vector(2) << 0.0, 0.75 * v).finished()};
  witness.comparison = BidProfile{(Vector(2) << 0.5 * v, 0.25 * v).finished()};

  const double sw = run_auction(witness.instance, witness.profile).welfare;
  const double sw_star = run_auction(witness.instance, witness.comparison).welfare;
  double deviation_total = 0.0;
  for (int i = 0; i < 2; ++i) {
    deviation_total += deviation_utility(witness.instance, witness.profile, i,
                                         witness.comparison.bids[i]);
  }
  witness.violation = lambda * sw_star - mu * sw - deviation_total;
  if (!(witness.violation > 0.0)) {
    throw std::runtime_error(
        "smoothness_counterexample: construction failed to violate the inequality");
  }
  return witness;
}

double bounded_g(const BoundedFnSpec& spec, double y) {
  if (y < 0.0 || y > 1.0) return 0.0;
  if (y < spec.lambda) return spec.kappa / (1.0 - y);
  if (y < spec.mu) {
    return (spec.kappa - 1.0) * (1.0 - spec.mu) / ((1.0 - y) * (1.0 - y));
  }
  return 0.0;
}

double bounded_g_mass(const BoundedFnSpec& spec) {
  return (spec.kappa - 1.0) * (spec.mu - spec.lambda) / (1.0 - spec.lambda) -
         spec.kappa * std::log(1.0 - spec.lambda);
}

double bounded_g_tail(const BoundedFnSpec& spec, double z) {
  const double kappa = spec.kappa;
  const double lambda = spec.lambda;
  const double mu = spec.mu;
  if (z >= mu) return 0.0;
  if (z >= lambda) {
    return (kappa - 1.0) * (1.0 - (1.0 - mu) / (1.0 - z));
  }
  return kappa * std::log((1.0 - z) / (1.0 - lambda)) +
         (kappa - 1.0) * (mu - lambda) / (1.0 - lambda);
}

double bounded_g_linear_tail(const BoundedFnSpec& spec, double z) {
  const double kappa = spec.kappa;
  const double lambda = spec.lambda;
  const double mu = spec.mu;
  const double mid = (kappa - 1.0) * (1.0 - mu) * std::log((1.0 - lambda) / (1.0 - mu));
  if (z >= mu) return 0.0;
  if (z >= lambda) {
    return (kappa - 1.0) * (1.0 - mu) * std::log((1.0 - z) / (1.0 - mu));
  }
  return kappa * (lambda - z) + mid;
}

double cor_bounded_g(double lambda, double y) {
  if (y < 0.0 || y > lambda) return 0.0;
  return 1.0 / ((1.0 - lambda) * (1.0 - y));
}

double cor_bounded_g_mass(double lambda) {
  return -std::log(1.0 - lambda) / (1.0 - lambda);
}

double cor_bounded_g_linear_tail(double lambda, double z) {
  return (lambda - std::min(z, lambda)) / (1.0 - lambda);
}

bool CertificateReport::pass() const {
  for (const auto& entry : checks) {
    if (!entry.pass) return false;
  }
  return true;
}

std::string CertificateReport::to_text() const {
  std::ostringstream out;
  out << title << " (grid " << grid_size << ")\n";
  for (const auto& entry : checks) {
    out << "  [" << (entry.pass ? "PASS" : "FAIL") << "] " << entry.name
        << ": worst margin " << entry.worst_margin << " at " << entry.worst_at
        << " (tolerance " << entry.tolerance << ")\n";
  }
  return out.str();
}

namespace {

CheckEntry min_over_grid(const std::string& name,
                         const std::function<double(double)>& margin,
                         const std::vector<double>& extra_points, int grid_size,
                         double tolerance) {
  CheckEntry entry;
  entry.name = name;
  entry.tolerance = tolerance;
  entry.worst_margin = std::numeric_limits<double>::infinity();
  const auto consider = [&](double z) {
    const double m = margin(z);
    if (m < entry.worst_margin) {
      entry.worst_margin = m;
      entry.worst_at = z;
    }
  };
  for (int k = 0; k <= grid_size; ++k) {
    consider(static_cast<double>(k) / grid_size);
  }
  for (double z : extra_points) {
    if (z >= 0.0 && z <= 1.0) consider(z);
  }
  entry.pass = entry.worst_margin >= -tolerance;
  return entry;
}

CheckEntry scalar_check(const std::string& name, double margin, double at,
                        double tolerance) {
  CheckEntry entry;
  entry.name = name;
  entry.worst_margin = margin;
  entry.worst_at = at;
  entry.tolerance = tolerance;
  entry.pass = margin >= -tolerance;
  return entry;
}

}  // namespace

CertificateReport verify_bounded_function(const BoundedFnSpec& spec, int grid_size,
                                          double tolerance) {
  validate_bounded_spec(spec);
  if (grid_size < 1000) {
    throw std::invalid_argument("verify_bounded_function: grid_size below 1000");
  }
  const double beta = (spec.kappa - 1.0) * spec.mu;
  const double delta = spec.kappa - 1.0;

  CertificateReport report;
  report.title = "bounded deviation density (two-piece)";
  report.grid_size = grid_size;
  report.tolerance = tolerance;

  report.checks.push_back(
      scalar_check("unit-mass", 1.0 - bounded_g_mass(spec), 0.0, tolerance));
  report.checks.push_back(min_over_grid(
      "tail-lower-bound",
      [&](double z) { return (1.0 - z) * bounded_g_tail(spec, z) - (beta - delta * z); },
      {spec.lambda, spec.mu}, grid_size, tolerance));
  report.checks.push_back(min_over_grid(
      "linear-tail-lower-bound",
      [&](double z) {
        return bounded_g_linear_tail(spec, z) - (beta - (1.0 + delta) * z);
      },
      {spec.lambda, spec.mu}, grid_size, tolerance));

  const double condition1 =
      (spec.kappa - 1.0) * (spec.mu - spec.lambda) / (1.0 - spec.lambda) -
      spec.kappa * std::log(1.0 - spec.lambda);
  report.checks.push_back(
      scalar_check("parameter-condition-1", 1.0 - condition1, condition1, tolerance));
  const double condition2 =
      (spec.kappa - 1.0) * (1.0 - spec.mu) *
          std::log((1.0 - spec.lambda) / (1.0 - spec.mu)) -
      (spec.kappa - 1.0) * spec.mu + spec.kappa * spec.lambda;
  report.checks.push_back(
      scalar_check("parameter-condition-2", condition2, condition2, tolerance));
  return report;
}

CertificateReport verify_cor_bounded_function(double lambda, int grid_size,
                                              double tolerance) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw std::invalid_argument("verify_cor_bounded_function: lambda must be in (0,1)");
  }
  const double beta = lambda / (1.0 - lambda);

  CertificateReport report;
  report.title = "bounded deviation density (single-piece)";
  report.grid_size = grid_size;
  report.tolerance = tolerance;
  report.checks.push_back(
      scalar_check("unit-mass", 1.0 - cor_bounded_g_mass(lambda), 0.0, tolerance));
  report.checks.push_back(min_over_grid(
      "linear-tail-lower-bound",
      [&](double z) {
        return cor_bounded_g_linear_tail(lambda, z) - (beta - (1.0 + beta) * z);
      },
      {lambda}, grid_size, tolerance));
  return report;
}

double solve_lambda_root() {
  double lo = 1e-15;
  double hi = 1.0 - 1e-15;
  const auto residual = [](double x) { return 1.0 - x + std::log1p(-x); };
  // residual decreases from ~1 to -inf on (0, 1).
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (residual(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

double technical_program_objective(double r, double lambda, double mu) {
  // f at the binding lower bounds for the two monotone coordinates.
  const double beta = std::max(0.0, 1.0 - mu);
  const double delta = std::max(0.0, 1.0 - mu / lambda);
  return mu + beta * (1.0 - lambda / r) + delta * (lambda - mu) - 1.0 / r;
}

}  // namespace

CertificateReport verify_technical_lemmas(double tolerance) {
  const double r = max_weakly_feasible_inefficiency();

  CertificateReport report;
  report.title = "technical lemmas";
  report.grid_size = 1000;
  report.tolerance = tolerance;

  report.checks.push_back(scalar_check("r-matches-1.28216",
                                       1e-5 - std::abs(r - 1.28216), r, 0.0));

  // (a) The four-variable program is non-negative. The objective is
  // non-decreasing in beta and delta (their coefficients are non-negative on
  // the domain), so the minimum sits at the binding constraints; scan the
  // remaining (lambda, mu) box and polish the best cell.
  {
    double worst = std::numeric_limits<double>::infinity();
    double worst_lambda = 0.0;
    double worst_mu = 0.0;
    const int steps = 1000;
    for (int a = 1; a <= steps; ++a) {
      const double lambda = static_cast<double>(a) / steps;
      for (int b = 1; b <= a; ++b) {
        const double mu = static_cast<double>(b) / steps;
        const double value = technical_program_objective(r, lambda, mu);
        if (value < worst) {
          worst = value;
          worst_lambda = lambda;
          worst_mu = mu;
        }
      }
    }
    // Local refinement around the best grid cell.
    double span = 1.0 / steps;
    for (int round = 0; round < 30; ++round) {
      const double l0 = worst_lambda;
      const double m0 = worst_mu;
      for (int da = -2; da <= 2; ++da) {
        for (int db = -2; db <= 2; ++db) {
          const double lambda = std::clamp(l0 + da * span / 2.0, 1e-9, 1.0);
          const double mu = std::clamp(m0 + db * span / 2.0, 1e-12, lambda);
          const double value = technical_program_objective(r, lambda, mu);
          if (value < worst) {
            worst = value;
            worst_lambda = lambda;
            worst_mu = mu;
          }
        }
      }
      span *= 0.5;
    }
    CheckEntry entry = scalar_check("program-non-negative", worst, worst_lambda,
                                    tolerance);
    report.checks.push_back(entry);
  }

  // (b) The reduced cubic is non-negative on [0,1] and vanishes at its
  // interior minimizer.
  {
    const auto g = [&](double lambda) {
      return 1.0 - 1.0 / r - lambda / r + lambda * lambda / r -
             lambda * lambda * lambda / (4.0 * r * r);
    };
    report.checks.push_back(min_over_grid("cubic-non-negative", g, {}, 100000, 1e-9));
    const double lambda_star = (4.0 * r - 2.0 * std::sqrt(4.0 * r * r - 3.0 * r)) / 3.0;
    report.checks.push_back(scalar_check("cubic-root-at-minimizer",
                                         1e-6 - std::abs(g(lambda_star)), lambda_star,
                                         0.0));
  }

  // (c) sqrt(lambda^3 + 1) >= 1 - zeta*lambda + lambda^2/2 on [0,1], with a
  // strictly positive minimum for the equivalent cubic.
  {
    const double zeta = 0.129567;
    const auto difference = [&](double lambda) {
      const double rhs = 1.0 - zeta * lambda + 0.5 * lambda * lambda;
      return (lambda * lambda * lambda + 1.0) - rhs * rhs;
    };
    report.checks.push_back(
        min_over_grid("sqrt-inequality", difference, {}, 100000, 1e-9));
    const double lambda_star =
        (4.0 + 4.0 * zeta - 2.0 * std::sqrt(zeta * zeta + 8.0 * zeta + 1.0)) / 3.0;
    const double g3 = -std::pow(lambda_star, 3) / 4.0 +
                      (1.0 + zeta) * lambda_star * lambda_star -
                      (1.0 + zeta * zeta) * lambda_star + 2.0 * zeta;
    report.checks.push_back(
        scalar_check("shifted-cubic-min-positive", g3, lambda_star, 0.0));
  }
  return report;
}

std::vector<ConstantRow> theoretical_constants() {
  const double root = solve_lambda_root();
  const double kappa = 1.7507;
  const double mu = 0.7966;
  const double beta = (kappa - 1.0) * mu;
  const double delta = kappa - 1.0;
  const double r = max_weakly_feasible_inefficiency();
  const double zeta = 0.129567;

  const auto row = [](std::string name, double computed, double reference) {
    return ConstantRow{std::move(name), computed, reference,
                       std::abs(computed - reference)};
  };
  std::vector<ConstantRow> rows;
  rows.push_back(row("pota_full_info (1/lambda)", 1.0 / root, 2.3102));
  rows.push_back(row("poa_bayes_semi_smooth (2/(1-1/e))", 2.0 / kOneMinusInvE, 3.164));
  rows.push_back(row("poa_bayes (kappa/((kappa-1)mu))", kappa / beta, 2.9276));
  rows.push_back(row("poa_pure_full_info (r)", r, 1.282));
  rows.push_back(row("poa_pure_n2", 1.25, 1.25));
  rows.push_back(row("poa_pure_n3 (1+2zeta)", 1.0 + 2.0 * zeta, 1.259134));
  rows.push_back(row("approx_equilibrium_intercept (delta/beta)", delta / beta, 1.2553));
  rows.push_back(row("approx_equilibrium_slope (1/beta)", 1.0 / beta, 1.6722));
  rows.push_back(
      row("approx_equilibrium_eps0", approx_equilibrium_poa(0.0), 1.2553 + 1.6722));
  return rows;
}

double approx_equilibrium_poa(double epsilon) {
  if (!(epsilon >= 0.0) || epsilon >= 1.0) {
    throw std::invalid_argument("approx_equilibrium_poa: epsilon must be in [0, 1)");
  }
  const double kappa = 1.7507;
  const double mu = 0.7966;
  const double beta = (kappa - 1.0) * mu;
  const double delta = kappa - 1.0;
  return (1.0 / (1.0 - epsilon) + delta) / beta;
}

}  // namespace gsp
