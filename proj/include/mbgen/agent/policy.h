// Copyright 2026 The mbgen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MBGEN_AGENT_POLICY_H_
#define MBGEN_AGENT_POLICY_H_

#include <random>
#include <span>
#include <vector>

namespace mbgen {
namespace agent {

// Boltzmann probabilities exp(q / tau) / Z with the max subtracted first.
// Throws std::invalid_argument for tau <= 0.
std::vector<double> SoftmaxProbabilities(std::span<const float> q, double tau);

int SoftmaxAction(std::span<const float> q, double tau, std::mt19937_64& rng);

// Lowest-index argmax.
int GreedyAction(std::span<const float> q);

}  // namespace agent
}  // namespace mbgen

#endif  // MBGEN_AGENT_POLICY_H_
