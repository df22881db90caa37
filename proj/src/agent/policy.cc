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

#include "mbgen/agent/policy.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mbgen {
namespace agent {

std::vector<double> SoftmaxProbabilities(std::span<const float> q, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("softmax temperature must be positive");
  if (q.empty()) throw std::invalid_argument("softmax over no actions");
  const double top = *std::max_element(q.begin(), q.end());
  std::vector<double> p(q.size());
  double z = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    p[i] = std::exp((q[i] - top) / tau);
    z += p[i];
  }
  for (double& v : p) v /= z;
  return p;
}

int SoftmaxAction(std::span<const float> q, double tau, std::mt19937_64& rng) {
  std::vector<double> p = SoftmaxProbabilities(q, tau);
  double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    if (u < p[i]) return static_cast<int>(i);
    u -= p[i];
  }
  return static_cast<int>(p.size()) - 1;
}

int GreedyAction(std::span<const float> q) {
  return static_cast<int>(std::max_element(q.begin(), q.end()) - q.begin());
}

}  // namespace agent
}  // namespace mbgen
