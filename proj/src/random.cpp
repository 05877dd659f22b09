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

#include "gsp/random.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace gsp {

std::int64_t Rng::index(std::int64_t n) {
  return std::min<std::int64_t>(static_cast<std::int64_t>(uniform() * n), n - 1);
}

int Rng::categorical(const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  double u = uniform() * total;
  for (int k = 0; k < static_cast<int>(weights.size()); ++k) {
    u -= weights[k];
    if (u < 0.0) return k;
  }
  return static_cast<int>(weights.size()) - 1;
}

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t k) {
  // splitmix64 of (master, k); decorrelates consecutive seeds.
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

Vector sorted_values(Rng& rng, int n, ValueModel model, double decay) {
  Vector v(n);
  switch (model) {
    case ValueModel::kUniformSorted: {
      for (int i = 0; i < n; ++i) v[i] = rng.uniform();
      std::sort(v.data(), v.data() + n, std::greater<>());
      break;
    }
    case ValueModel::kGeometricDecay: {
      if (!(decay >= 0.0 && decay <= 1.0)) {
        throw std::invalid_argument("random_instance: decay must be in [0, 1]");
      }
      v[0] = 1.0;
      for (int i = 1; i < n; ++i) v[i] = v[i - 1] * decay;
      break;
    }
    case ValueModel::kPaperLike: {
      v[0] = 1.0;
      for (int i = 1; i < n; ++i) v[i] = v[i - 1] * rng.uniform(0.3, 0.95);
      break;
    }
  }
  return v;
}

ValueModel as_value_model(AlphaModel model) {
  switch (model) {
    case AlphaModel::kUniformSorted: return ValueModel::kUniformSorted;
    case AlphaModel::kGeometricDecay: return ValueModel::kGeometricDecay;
    case AlphaModel::kPaperLike: return ValueModel::kPaperLike;
  }
  return ValueModel::kUniformSorted;
}

}  // namespace

AuctionInstance random_instance(Rng& rng, int n, const InstanceModel& model) {
  if (n < 1) throw std::invalid_argument("random_instance: n must be at least 1");
  Vector alphas = sorted_values(rng, n, as_value_model(model.alpha_model), model.decay);
  Vector valuations = sorted_values(rng, n, model.value_model, model.decay);
  Vector gammas = Vector::Ones(n);
  if (model.random_gammas) {
    for (int i = 0; i < n; ++i) {
      gammas[i] = std::exp(rng.uniform(std::log(0.5), std::log(2.0)));
    }
  }
  return make_instance(std::move(alphas), std::move(valuations), std::move(gammas));
}

AuctionInstance random_instance(std::uint64_t seed, int n, const InstanceModel& model) {
  Rng rng(seed);
  return random_instance(rng, n, model);
}

BidProfile random_conservative_bids(Rng& rng, const AuctionInstance& instance) {
  Vector bids(instance.n());
  for (int i = 0; i < instance.n(); ++i) {
    bids[i] = rng.uniform() * instance.valuations[i];
  }
  return BidProfile{std::move(bids)};
}

}  // namespace gsp
