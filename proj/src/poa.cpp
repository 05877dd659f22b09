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

#include "gsp/poa.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "gsp/auction.hpp"
#include "gsp/equilibria.hpp"
#include "gsp/random.hpp"

namespace gsp {

double inefficiency(const AuctionInstance& instance, const Permutation& slot_to_player) {
  const double opt = optimal_welfare(instance).value;
  const double sw = welfare_of(instance, slot_to_player);
  if (sw <= 0.0) {
    return opt > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  }
  return opt / sw;
}

double max_weakly_feasible_inefficiency() {
  return (61.0 + 7.0 * std::sqrt(217.0)) / 128.0;
}

std::vector<std::pair<Permutation, double>> enumerate_weakly_feasible(
    const AuctionInstance& instance) {
  validate_instance(instance);
  if (instance.n() > 8) {
    throw std::invalid_argument(
        "enumerate_weakly_feasible: refusing factorial enumeration for n > 8");
  }
  std::vector<std::pair<Permutation, double>> result;
  Permutation perm = identity_permutation(instance.n());
  do {
    if (weak_feasibility(instance, perm).holds) {
      result.emplace_back(perm, inefficiency(instance, perm));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::sort(result.begin(), result.end(),
            [](const auto& a, const auto& b) { return a.second > b.second; });
  return result;
}

namespace {

// Golden-section maximization on [a, b]; keeps the right interval on ties so
// jump discontinuities at a feasibility boundary stay bracketed. Returns the
// best point evaluated.
template <typename F>
std::pair<double, double> golden_max(F&& f, double a, double b, int iterations,
                                     std::int64_t* evals) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  *evals += 2;
  std::pair<double, double> best = f1 >= f2 ? std::make_pair(x1, f1)
                                            : std::make_pair(x2, f2);
  for (int it = 0; it < iterations; ++it) {
    if (f1 <= f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
      if (f2 > best.second) best = {x2, f2};
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
      if (f1 > best.second) best = {x1, f1};
    }
    ++*evals;
  }
  return best;
}

double n2_boundary_objective(double lambda) {
  // Ratio along the binding constraint beta = 1 - lambda.
  return 1.0 + lambda * (1.0 - lambda);
}

double n3_reduced_objective(double lambda) {
  return (lambda * lambda + lambda + 2.0 - 2.0 * std::sqrt(lambda * lambda * lambda + 1.0)) /
         lambda;
}

}  // namespace

SearchResult worst_case_n2() {
  SearchResult result;
  result.method = "closed-form";
  result.witness = make_instance((Vector(2) << 1.0, 0.5).finished(),
                                 (Vector(2) << 1.0, 0.5).finished());
  result.witness_allocation = {1, 0};
  result.equilibrium_bids = BidProfile{(Vector(2) << 0.0, 0.5).finished()};
  result.best_ratio = inefficiency(result.witness, result.witness_allocation);
  result.diagnostics["lambda_star"] = 0.5;
  result.diagnostics["boundary_objective"] = n2_boundary_objective(0.5);
  return result;
}

SearchResult worst_case_n3() {
  SearchResult result;
  result.method = "closed-form";
  std::int64_t evals = 0;
  const auto [lambda_star, sup] =
      golden_max(n3_reduced_objective, 1e-6, 1.0, 200, &evals);
  result.iterations = evals;

  auto [witness, bids] = reference_instance("poa3");
  result.witness = std::move(witness);
  result.equilibrium_bids = std::move(bids);
  result.witness_allocation = {1, 2, 0};
  result.best_ratio = inefficiency(result.witness, result.witness_allocation);
  result.diagnostics["lambda_star"] = lambda_star;
  result.diagnostics["analytic_sup"] = sup;
  result.diagnostics["mu_star"] =
      1.0 + lambda_star - std::sqrt(lambda_star * lambda_star * lambda_star + 1.0);
  return result;
}

namespace {

// Irreducibility of the slot graph is a property of the permutation alone.
bool is_irreducible_perm(const Permutation& slot_to_player) {
  const Permutation player_to_slot = inverse_permutation(slot_to_player);
  const int n = static_cast<int>(slot_to_player.size());
  int length = 0;
  int cur = 0;
  do {
    cur = player_to_slot[cur];
    ++length;
  } while (cur != 0 && length <= n);
  return length == n;
}

struct NumericTask {
  Permutation allocation;
  std::uint64_t seed = 0;
  std::int64_t budget = 0;
};

struct NumericBest {
  double ratio = -1.0;
  Vector alphas;
  Vector valuations;
  Permutation allocation;
  std::int64_t evals = 0;
  bool settled = false;
};

// Coordinates are cumulative decay ratios in [0,1]^(2n-2):
// alpha_k = prod of the first k alpha ratios, likewise for valuations.
AuctionInstance instance_from_ratios(const std::vector<double>& x, int n) {
  Vector alphas(n), valuations(n);
  alphas[0] = 1.0;
  valuations[0] = 1.0;
  for (int k = 1; k < n; ++k) {
    alphas[k] = alphas[k - 1] * x[k - 1];
    valuations[k] = valuations[k - 1] * x[n - 2 + k];
  }
  return AuctionInstance{std::move(alphas), std::move(valuations), Vector::Ones(n)};
}

NumericBest run_numeric_task(int n, const NumericTask& task) {
  NumericBest best;
  best.allocation = task.allocation;
  Rng rng(task.seed);
  const int dims = 2 * n - 2;

  std::vector<double> x(dims);
  double current = -1.0;

  // Exact penalty keeps the objective finite and continuous across the
  // feasibility boundary; the optima sit exactly on it, and a hard rejection
  // wall makes line searches crawl. Only feasible points are recorded.
  constexpr double kPenalty = 4.0;
  const auto penalized = [&](const AuctionInstance& instance) {
    const Vector ev = effective_values(instance);
    const auto ratio = [](double num, double den) {
      if (den > 0.0) return num / den;
      return num > 0.0 ? 10.0 : 0.0;
    };
    double violation = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const double lhs =
            std::min(10.0, ratio(instance.alphas[j], instance.alphas[i]) +
                               ratio(ev[task.allocation[i]], ev[task.allocation[j]]));
        violation += std::max(0.0, 1.0 - lhs);
      }
    }
    const double sw = welfare_of(instance, task.allocation);
    if (!(sw > 1e-9)) return std::make_pair(-1.0, violation);
    // Infeasible points can drive SW toward zero and the raw ratio toward
    // infinity; capping just above the proven bound keeps the feasible
    // landscape intact while the penalty dominates outside it.
    const double capped =
        std::min(optimal_welfare(instance).value / sw, 1.3);
    return std::make_pair(capped, violation);
  };
  const auto objective = [&](const std::vector<double>& point) {
    ++best.evals;
    const AuctionInstance instance = instance_from_ratios(point, n);
    const auto [ratio, violation] = penalized(instance);
    if (violation <= 1e-9 && ratio > best.ratio) {
      best.ratio = ratio;
      best.alphas = instance.alphas;
      best.valuations = instance.valuations;
    }
    return ratio - kPenalty * violation;
  };

  // Golden-section along one coordinate axis, bracketing the best point of a
  // coarse scan first.
  std::int64_t dummy = 0;
  constexpr int kScanPoints = 17;
  const auto axis_search = [&](int c) {
    const double saved = x[c];
    double best_u = saved;
    double best_val = current;
    for (int s = 0; s < kScanPoints; ++s) {
      x[c] = static_cast<double>(s) / (kScanPoints - 1);
      const double val = objective(x);
      if (val > best_val) {
        best_val = val;
        best_u = x[c];
      }
    }
    const double step = 1.0 / (kScanPoints - 1);
    const auto [gx, gval] = golden_max(
        [&](double u) {
          x[c] = u;
          return objective(x);
        },
        std::max(0.0, best_u - step), std::min(1.0, best_u + step), 48, &dummy);
    if (gval > best_val) {
      best_val = gval;
      best_u = gx;
    }
    x[c] = best_u;
    const bool gained = best_val > current + 1e-13;
    current = best_val;
    return gained;
  };

  // Golden-section along an arbitrary direction, clipped to the unit cube.
  // Needed because the optima sit on active weak-feasibility constraints,
  // where axis moves alone stall.
  std::vector<double> base(dims), direction(dims);
  const auto line_search = [&] {
    base = x;
    double t_lo = -std::numeric_limits<double>::infinity();
    double t_hi = std::numeric_limits<double>::infinity();
    for (int d = 0; d < dims; ++d) {
      if (direction[d] > 0.0) {
        t_lo = std::max(t_lo, -base[d] / direction[d]);
        t_hi = std::min(t_hi, (1.0 - base[d]) / direction[d]);
      } else if (direction[d] < 0.0) {
        t_lo = std::max(t_lo, (1.0 - base[d]) / direction[d]);
        t_hi = std::min(t_hi, -base[d] / direction[d]);
      }
    }
    if (!(t_hi > t_lo)) return false;
    const auto line = [&](double t) {
      for (int d = 0; d < dims; ++d) {
        x[d] = std::clamp(base[d] + t * direction[d], 0.0, 1.0);
      }
      return objective(x);
    };
    // Coarse scan first: the feasible stretch of the line can be a small
    // fraction of the clipped range, which plain golden section would drop.
    double best_t = 0.0;
    double best_val = current;
    constexpr int kLineScan = 16;
    for (int s = 0; s <= kLineScan; ++s) {
      const double t = t_lo + (t_hi - t_lo) * static_cast<double>(s) / kLineScan;
      const double val = line(t);
      if (val > best_val) {
        best_val = val;
        best_t = t;
      }
    }
    const double cell = (t_hi - t_lo) / kLineScan;
    const auto [gt, gval] =
        golden_max(line, std::max(t_lo, best_t - cell),
                   std::min(t_hi, best_t + cell), 48, &dummy);
    if (gval > best_val) {
      best_val = gval;
      best_t = gt;
    }
    if (best_val > current + 1e-13) {
      for (int d = 0; d < dims; ++d) {
        x[d] = std::clamp(base[d] + best_t * direction[d], 0.0, 1.0);
      }
      current = best_val;
      return true;
    }
    x = base;
    return false;
  };

  // Downhill-simplex polish from the sweep incumbent; simplex steps adapt to
  // the penalty crest that axis and line moves zigzag across.
  const auto simplex_polish = [&](double init_step) {
    std::vector<std::vector<double>> simplex(dims + 1, x);
    std::vector<double> value(dims + 1);
    value[0] = current;
    for (int d = 0; d < dims; ++d) {
      auto& vertex = simplex[d + 1];
      vertex[d] = vertex[d] + init_step <= 1.0 ? vertex[d] + init_step
                                               : vertex[d] - init_step;
      value[d + 1] = objective(vertex);
    }
    std::vector<double> centroid(dims), reflected(dims), expanded(dims),
        contracted(dims);
    for (int iter = 0; iter < 700 && best.evals < task.budget; ++iter) {
      std::vector<int> order(dims + 1);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(),
                [&](int a, int b) { return value[a] > value[b]; });
      const int worst = order[dims];
      const int second = order[dims - 1];
      const int top = order[0];

      double diameter = 0.0;
      for (int d = 0; d < dims; ++d) {
        diameter = std::max(diameter,
                            std::abs(simplex[top][d] - simplex[worst][d]));
      }
      if (diameter < 1e-12) break;

      for (int d = 0; d < dims; ++d) {
        double sum = 0.0;
        for (int k = 0; k <= dims; ++k) {
          if (k != worst) sum += simplex[k][d];
        }
        centroid[d] = sum / dims;
      }
      const auto clamped = [&](std::vector<double>& out, double factor) {
        for (int d = 0; d < dims; ++d) {
          out[d] = std::clamp(centroid[d] + factor * (centroid[d] - simplex[worst][d]),
                              0.0, 1.0);
        }
      };
      clamped(reflected, 1.0);
      const double reflected_value = objective(reflected);
      if (reflected_value > value[top]) {
        clamped(expanded, 2.0);
        const double expanded_value = objective(expanded);
        if (expanded_value > reflected_value) {
          simplex[worst] = expanded;
          value[worst] = expanded_value;
        } else {
          simplex[worst] = reflected;
          value[worst] = reflected_value;
        }
      } else if (reflected_value > value[second]) {
        simplex[worst] = reflected;
        value[worst] = reflected_value;
      } else {
        clamped(contracted, -0.5);
        const double contracted_value = objective(contracted);
        if (contracted_value > value[worst]) {
          simplex[worst] = contracted;
          value[worst] = contracted_value;
        } else {
          for (int k = 0; k <= dims; ++k) {
            if (k == top) continue;
            for (int d = 0; d < dims; ++d) {
              simplex[k][d] = simplex[top][d] + 0.5 * (simplex[k][d] - simplex[top][d]);
            }
            value[k] = objective(simplex[k]);
            if (best.evals >= task.budget) break;
          }
        }
      }
    }
    int top = 0;
    for (int k = 1; k <= dims; ++k) {
      if (value[k] > value[top]) top = k;
    }
    if (value[top] > current) {
      x = simplex[top];
      current = value[top];
    }
  };

  std::vector<int> coord_order(dims);
  std::iota(coord_order.begin(), coord_order.end(), 0);
  std::vector<double> sweep_start(dims);
  bool any_unsettled = false;

  while (best.evals < task.budget) {
    // Fresh restart.
    for (int d = 0; d < dims; ++d) x[d] = rng.uniform();
    current = objective(x);

    int stalled_sweeps = 0;
    while (stalled_sweeps < 3 && best.evals < task.budget) {
      bool improved = false;
      sweep_start = x;
      for (int d = dims - 1; d > 0; --d) {
        std::swap(coord_order[d], coord_order[rng.index(d + 1)]);
      }
      for (int c : coord_order) {
        if (best.evals >= task.budget) break;
        improved = axis_search(c) || improved;
      }
      // Pattern move along the net sweep displacement, then a few random
      // directions; both follow the constraint ridge that axis moves zigzag
      // across.
      double norm = 0.0;
      for (int d = 0; d < dims; ++d) {
        direction[d] = x[d] - sweep_start[d];
        norm += direction[d] * direction[d];
      }
      if (norm > 0.0 && best.evals < task.budget) {
        improved = line_search() || improved;
      }
      for (int k = 0; k < 2 * dims && best.evals < task.budget; ++k) {
        for (int d = 0; d < dims; ++d) direction[d] = rng.uniform(-1.0, 1.0);
        improved = line_search() || improved;
      }
      stalled_sweeps = improved ? 0 : stalled_sweeps + 1;
    }
    for (double step : {0.05, 0.005, 5e-4, 5e-5}) {
      if (best.evals >= task.budget) break;
      simplex_polish(step);
    }
    if (stalled_sweeps < 3) any_unsettled = true;
  }
  best.settled = !any_unsettled;
  return best;
}

}  // namespace

SearchResult worst_case_numeric(int n, const std::optional<Permutation>& allocation,
                                std::int64_t budget, std::uint64_t seed) {
  if (n < 2 || n > 6) {
    throw std::invalid_argument(
        "worst_case_numeric: n must be between 2 and 6 (a single player has no "
        "non-optimal allocation)");
  }
  if (budget < 100) throw std::invalid_argument("worst_case_numeric: budget too small");

  std::vector<Permutation> allocations;
  if (allocation) {
    if (static_cast<int>(allocation->size()) != n || !is_permutation(*allocation)) {
      throw std::invalid_argument("worst_case_numeric: invalid allocation");
    }
    allocations.push_back(*allocation);
  } else {
    // All irreducible allocations, one representative per inverse pair (the
    // swapped game covers the other orientation).
    Permutation perm = identity_permutation(n);
    do {
      if (!is_irreducible_perm(perm)) continue;
      const Permutation inv = inverse_permutation(perm);
      if (perm <= inv) allocations.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  // Each restart needs room for the sweep phase plus the simplex cascade.
  const std::int64_t per_restart = (2 * n - 2) * 1500;
  const int restarts = static_cast<int>(std::clamp<std::int64_t>(
      budget / std::max<std::int64_t>(
                   1, per_restart * static_cast<std::int64_t>(allocations.size())),
      1, 64));
  std::vector<NumericTask> tasks;
  for (int r = 0; r < restarts; ++r) {
    for (const auto& alloc : allocations) {
      tasks.push_back({alloc, substream_seed(seed, tasks.size()), 0});
    }
  }
  const std::int64_t per_task = std::max<std::int64_t>(
      100, budget / static_cast<std::int64_t>(tasks.size()));
  for (auto& task : tasks) task.budget = per_task;

  // Restarts are independent; fan them out and merge by ratio.
  const unsigned workers =
      std::max(1u, std::min(std::thread::hardware_concurrency(),
                            static_cast<unsigned>(tasks.size())));
  std::vector<NumericBest> bests(tasks.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t k = next.fetch_add(1);
        if (k >= tasks.size()) return;
        bests[k] = run_numeric_task(n, tasks[k]);
      }
    });
  }
  for (auto& th : pool) th.join();

  SearchResult result;
  result.method = "numeric-maximization";
  std::size_t win = 0;
  for (std::size_t k = 1; k < bests.size(); ++k) {
    if (bests[k].ratio > bests[win].ratio) win = k;
  }
  const NumericBest& top = bests[win];
  result.best_ratio = top.ratio;
  result.witness = AuctionInstance{top.alphas, top.valuations,
                                   Vector::Ones(top.alphas.size())};
  result.witness_allocation = top.allocation;
  for (const auto& b : bests) {
    result.iterations += b.evals;
    if (!b.settled) result.budget_exhausted = true;
  }
  result.diagnostics["restarts"] = static_cast<double>(restarts);
  result.diagnostics["allocations"] = static_cast<double>(allocations.size());

  if (result.best_ratio > max_weakly_feasible_inefficiency() + 1e-6) {
    result.bound_violated = true;
    std::cerr << "worst_case_numeric: ratio " << result.best_ratio
              << " exceeds the proven bound; witness alphas/valuations:\n"
              << top.alphas.transpose() << "\n"
              << top.valuations.transpose() << "\n";
  }
  return result;
}

ReductionResult reduce_and_bound(const AuctionInstance& instance,
                                 const Permutation& slot_to_player) {
  validate_instance(instance);
  const AllocationStructure structure = allocation_structure(instance, slot_to_player);

  // allocation_structure relabeled the players by effective value; mirror that
  // ordering here so player k sits on slot k in the subgames.
  const Vector ev = effective_values(instance);
  Permutation order = identity_permutation(instance.n());
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (ev[a] != ev[b]) return ev[a] > ev[b];
    return a < b;
  });

  ReductionResult result;
  result.overall_ratio = inefficiency(instance, slot_to_player);
  result.max_cycle_ratio = 1.0;
  for (const auto& cycle : structure.cycles) {
    CycleBound bound;
    bound.slots = cycle;
    std::sort(bound.slots.begin(), bound.slots.end());
    const int m = static_cast<int>(bound.slots.size());

    Vector alphas(m), valuations(m), gammas(m);
    std::vector<int> pos(instance.n(), -1);
    for (int idx = 0; idx < m; ++idx) {
      const int slot = bound.slots[idx];
      alphas[idx] = instance.alphas[slot];
      valuations[idx] = instance.valuations[order[slot]];
      gammas[idx] = instance.gammas[order[slot]];
      pos[slot] = idx;
    }
    bound.subgame = AuctionInstance{std::move(alphas), std::move(valuations),
                                    std::move(gammas)};
    bound.sub_allocation.resize(m);
    for (int idx = 0; idx < m; ++idx) {
      const int slot = bound.slots[idx];
      bound.sub_allocation[idx] = pos[structure.slot_to_player[slot]];
    }
    bound.ratio = inefficiency(bound.subgame, bound.sub_allocation);
    result.max_cycle_ratio = std::max(result.max_cycle_ratio, bound.ratio);
    result.cycles.push_back(std::move(bound));
  }
  return result;
}

std::pair<AuctionInstance, Permutation> dual_game(const AuctionInstance& instance,
                                                  const Permutation& slot_to_player) {
  validate_instance(instance);
  if (static_cast<int>(slot_to_player.size()) != instance.n() ||
      !is_permutation(slot_to_player)) {
    throw std::invalid_argument("dual_game: not a permutation");
  }
  // Work on the sorted, quality-folded form: slot CTRs become the effective
  // values and vice versa; the allocation inverts.
  const Vector ev = effective_values(instance);
  Permutation order = identity_permutation(instance.n());
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (ev[a] != ev[b]) return ev[a] > ev[b];
    return a < b;
  });
  Permutation rank(instance.n());
  for (int k = 0; k < instance.n(); ++k) rank[order[k]] = k;

  Vector sorted_ev(instance.n());
  for (int k = 0; k < instance.n(); ++k) sorted_ev[k] = ev[order[k]];
  Permutation relabeled(instance.n());
  for (int s = 0; s < instance.n(); ++s) relabeled[s] = rank[slot_to_player[s]];

  AuctionInstance dual{sorted_ev, instance.alphas, Vector::Ones(instance.n())};
  validate_instance(dual);
  return {dual, inverse_permutation(relabeled)};
}

}  // namespace gsp
