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

// Q-learning against frozen dynamics-model checkpoints.

#ifndef MBGEN_PROBE_FROZEN_H_
#define MBGEN_PROBE_FROZEN_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mbgen/agent/training.h"
#include "mbgen/stats.h"

namespace mbgen {
namespace probe {

struct FrozenCheckpoint {
  // Model updates the checkpoint received before freezing.
  std::int64_t update = 0;
  nn::MlpParams<float> params;
};

// 1k, 2k, 5k, 10k, 20k, 50k, ... up to and including `max_update`.
std::vector<std::int64_t> GeometricCheckpointSchedule(std::int64_t max_update);

// Loads every dynamics-model checkpoint in `dir` (recursively), taking the
// step from the "update" metadata; sorted by step, then path.
std::vector<FrozenCheckpoint> LoadModelCheckpoints(const std::string& dir);

struct FrozenStudyConfig {
  // Environment, agent hyperparameters and update budget of each run; the
  // agent kind is forced to the simple model with training disabled.
  agent::OnlineConfig base;
  int seeds = 30;
  std::uint64_t first_seed = 0;
  // Success threshold on the greedy reward rate; 0 selects 0.95 / pipes.
  double threshold = 0.0;
  // Active-end count at which the model's predicted reward is reported.
  int reward_bin = 6;
  std::int64_t probe_steps = 100000;
  int jobs = 1;
};

// Default base: 9-pipe PanFlute, high-data regime.
FrozenStudyConfig DefaultFrozenStudyConfig();

struct FrozenSeedOutcome {
  std::uint64_t seed = 0;
  // Update index / environment steps at the first evaluation reaching the
  // threshold; empty when censored at the budget.
  std::optional<std::int64_t> reached_update;
  std::optional<std::int64_t> reached_env_steps;
  bool failed_run = false;
};

struct FrozenModelResult {
  std::int64_t checkpoint_update = 0;
  std::vector<FrozenSeedOutcome> seeds;
  int successes = 0;
  // Censored at the budget or failed (non-finite); successes + failures ==
  // seeds.size().
  int failures = 0;
  MeanCi env_steps_to_threshold;
  double predicted_reward_at_bin = 0.0;
};

std::vector<FrozenModelResult> FrozenModelStudy(const std::vector<FrozenCheckpoint>& checkpoints,
                                                const FrozenStudyConfig& config);

// checkpoint_update,seeds,successes,failures,mean_env_steps,ci95_half_width,
// predicted_reward_at_bin
void WriteFrozenCsv(const std::vector<FrozenModelResult>& results, std::ostream& out);

}  // namespace probe
}  // namespace mbgen

#endif  // MBGEN_PROBE_FROZEN_H_
