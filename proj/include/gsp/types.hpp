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

#ifndef GSP_TYPES_HPP
#define GSP_TYPES_HPP

#include <Eigen/Core>
#include <vector>

namespace gsp {

using Vector = Eigen::VectorXd;

// Slot allocation: perm[k] is the (0-based) player assigned to slot k.
using Permutation = std::vector<int>;

// Default absolute tolerance on utilities/welfare comparisons.
inline constexpr double kDefaultTolerance = 1e-9;

// Bids above the valuation by more than this are rejected as overbidding.
inline constexpr double kOverbidTolerance = 1e-12;

bool is_permutation(const Permutation& perm);
Permutation inverse_permutation(const Permutation& perm);
Permutation identity_permutation(int n);

}  // namespace gsp

#endif  // GSP_TYPES_HPP
