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

#ifndef MBGEN_AGENT_TRAINING_H_
#define MBGEN_AGENT_TRAINING_H_

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mbgen/agent/agent.h"
#include "mbgen/env/factory.h"

namespace mbgen {
namespace agent {

// Derives independent sub-seeds from one run seed.
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream);

struct EvalConfig {
  int episodes = 10;  // episodic environments, capped at episode_cap() steps
  int steps = 1000;   // continuing environments, reported as a reward rate
};

// Greedy performance on a fresh environment instance seeded with `seed`.
double EvaluateGreedy(const Agent& agent, const env::EnvSpec& spec, std::uint64_t seed,
                      const EvalConfig& eval);

struct OnlineConfig {
  env::EnvSpec env;
  AgentConfig agent;
  // Environment steps after warm-up; every one of them triggers
  // updates_per_step updates, so total updates = steps * updates_per_step.
  std::int64_t steps = 100000;
  int updates_per_step = 10;
  int warmup = 1000;
  std::size_t buffer_capacity = 100000;
  int eval_interval = 5000;
  EvalConfig eval;
  std::uint64_t seed = 0;
  // Stop early once an evaluation reaches this score.
  double stop_at_score = std::numeric_limits<double>::infinity();
  // Update indices after which on_model_checkpoint is called.
  std::vector<std::int64_t> model_checkpoints;
  std::function<void(std::int64_t, const SimpleDynamicsModel&)> on_model_checkpoint;
  // Replaces the learned model before training (frozen-model study).
  std::optional<nn::MlpParams<float>> initial_model;
};

// high: 10^6 steps x 1 update; low: 10^5 steps x 10 updates. `scale` divides
// the step count (desk-scale runs).
void ApplyRegime(OnlineConfig& config, const std::string& regime, double scale = 1.0);

struct MetricsRow {
  std::int64_t update_index = 0;
  std::int64_t env_steps = 0;
  double eval_score = 0.0;
  double td_loss = 0.0;
  double model_obs_loss = 0.0;
  double model_reward_loss = 0.0;
  double model_term_loss = 0.0;
};

struct RunResult {
  std::vector<MetricsRow> curve;
  BudgetCounters budget;
  std::int64_t env_steps = 0;
  std::int64_t updates = 0;
  bool failed = false;
  std::string error;
  // First update index whose evaluation reached stop_at_score, if any.
  std::optional<std::int64_t> reached_at;
};

// Interleaves softmax behaviour, replay insertion and updates; evaluates the
// greedy policy every eval_interval updates. Failures (non-finite values)
// are reported in the result rather than thrown.
RunResult TrainOnline(const OnlineConfig& config);

// Mean of the last `window` evaluation scores.
double FinalScore(const std::vector<MetricsRow>& curve, int window = 10);

struct OfflineConfig {
  AgentConfig agent;
  std::int64_t updates = 1000000;
  std::uint64_t seed = 0;
  // 0 infers the action count from the dataset.
  int num_actions = 0;
};

struct OfflineResult {
  nn::MlpParams<float> q;
  std::optional<nn::MlpParams<float>> model;
  BudgetCounters budget;
};

// Trains on a fixed dataset; throws std::invalid_argument if it is empty.
OfflineResult TrainOffline(const std::vector<env::Transition>& dataset,
                           const OfflineConfig& config);

}  // namespace agent
}  // namespace mbgen

#endif  // MBGEN_AGENT_TRAINING_H_
