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

#ifndef GSP_RANDOM_HPP
#define GSP_RANDOM_HPP

#include <cstdint>
#include <random>

#include "gsp/instance.hpp"

namespace gsp {

// mt19937_64 with portable double draws (53-bit mantissa), so identical seeds
// give identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return (engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, n).
  std::int64_t index(std::int64_t n);
  // Index drawn with the given (non-negative, positive-sum) weights.
  int categorical(const std::vector<double>& weights);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// Substream seed for replica/restart k of a master seed.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t k);

enum class AlphaModel { kUniformSorted, kGeometricDecay, kPaperLike };
enum class ValueModel { kUniformSorted, kGeometricDecay, kPaperLike };

struct InstanceModel {
  AlphaModel alpha_model = AlphaModel::kUniformSorted;
  ValueModel value_model = ValueModel::kUniformSorted;
  double decay = 0.5;          // ratio for the geometric models
  bool random_gammas = false;  // log-uniform in [0.5, 2]; otherwise all one
};

// Deterministic random instance: n sorted click-through rates and valuations
// per the chosen models. uniform-sorted draws i.i.d. U[0,1] and sorts;
// geometric-decay uses 1, d, d^2, ...; paper-like starts at 1 and applies
// independent U[0.3, 0.95] decay steps.
AuctionInstance random_instance(std::uint64_t seed, int n, const InstanceModel& model);
AuctionInstance random_instance(Rng& rng, int n, const InstanceModel& model);

// Conservative bid profile with each bid U[0, v_i].
BidProfile random_conservative_bids(Rng& rng, const AuctionInstance& instance);

}  // namespace gsp

#endif  // GSP_RANDOM_HPP
