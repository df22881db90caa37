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

// Reward and transition smoothing of a PanFlute model along real
// trajectories.

#ifndef MBGEN_PROBE_SMOOTHING_H_
#define MBGEN_PROBE_SMOOTHING_H_

#include <cstdint>
#include <functional>
#include <ostream>
#include <vector>

#include "mbgen/agent/dynamics_model.h"

namespace mbgen {
namespace probe {

using TransitionPredictor = std::function<agent::ModelPrediction(
    const nn::Matrix<float>& obs, const std::vector<int>& actions)>;

TransitionPredictor ModelPredictor(const agent::SimpleDynamicsModel& model);
// Exact reward and deterministic propagation (no spontaneous events).
TransitionPredictor GroundTruthPredictor(int pipes);

struct SmoothingConfig {
  std::int64_t steps = 100000;
  // Probability of playing the pipe after the previous one; otherwise the
  // action is uniform.
  double successor_probability = 0.8;
  bool disable_spontaneous = false;
  int batch = 4096;
  std::uint64_t seed = 0;
};

// Bins 0..pipes. Reward bins use the true active-end count of the current
// state; next bins use the true count after the step and hold the predicted
// probability that every end is active next (product over end bits). Empty
// bins have count 0 and a NaN mean.
struct SmoothingProfile {
  int pipes = 0;
  std::vector<std::int64_t> reward_count;
  std::vector<double> reward_mean;
  std::vector<std::int64_t> next_count;
  std::vector<double> all_next_mean;
};

SmoothingProfile SmoothingProbe(const TransitionPredictor& predictor, int pipes,
                                const SmoothingConfig& config);

// bin,reward_count,mean_predicted_reward,next_count,mean_all_ends_next;
// empty bins leave their mean blank.
void WriteSmoothingCsv(const SmoothingProfile& profile, std::ostream& out);

// Number of adjacent reported reward bins where the mean drops by more than
// `tolerance`, and the largest drop seen.
struct MonotonicityReport {
  int inversions = 0;
  double largest_drop = 0.0;
};
MonotonicityReport RewardMonotonicity(const SmoothingProfile& profile, double tolerance = 0.0);

}  // namespace probe
}  // namespace mbgen

#endif  // MBGEN_PROBE_SMOOTHING_H_
