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

#ifndef GSP_IO_HPP
#define GSP_IO_HPP

#include <string>

#include "gsp/instance.hpp"

namespace gsp {

// JSON schema: {"n": int, "alphas": [...], "valuations": [...], "gammas": [...]}.
// Distributions: {"n": int, "alphas": [...],
//                 "support": [{"prob": p, "valuations": [...], "gammas": [...]}]}.
// Numbers are decimal literals with shortest round-trip representation, so a
// save of a load reproduces the file.

AuctionInstance load_instance(const std::string& path);
void save_instance(const AuctionInstance& instance, const std::string& path);

JointDistribution load_distribution(const std::string& path);
void save_distribution(const JointDistribution& dist, const std::string& path);

std::string instance_to_json(const AuctionInstance& instance);
AuctionInstance instance_from_json(const std::string& text);
std::string distribution_to_json(const JointDistribution& dist);
JointDistribution distribution_from_json(const std::string& text);

// Resolves a CLI instance argument: a bundled reference name ("poa2",
// "poa3") or a path to a JSON file.
AuctionInstance resolve_instance(const std::string& name_or_path);

}  // namespace gsp

#endif  // GSP_IO_HPP
