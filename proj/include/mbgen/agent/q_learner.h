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

#ifndef MBGEN_AGENT_Q_LEARNER_H_
#define MBGEN_AGENT_Q_LEARNER_H_

#include <cstdint>

#include "mbgen/agent/replay.h"
#include "mbgen/nn/adamw.h"
#include "mbgen/nn/mlp.h"

namespace mbgen {
namespace agent {

struct QLearnerConfig {
  double step_size = 1e-4;
  double discount = 0.9;
  int target_period = 100;
  std::vector<int> hidden = {200, 200, 200};
};

// DQN value learner: online network, periodically copied target network and
// its own AdamW state.
class QLearner {
 public:
  QLearner(int obs_size, int num_actions, QLearnerConfig config, Rng& rng);

  int obs_size() const { return params_.arch().input; }
  int num_actions() const { return params_.arch().heads[0]; }
  std::int64_t updates() const { return updates_; }
  const QLearnerConfig& config() const { return config_; }

  const nn::MlpParams<float>& params() const { return params_; }
  const nn::MlpParams<float>& target_params() const { return target_; }
  void SetParams(const nn::MlpParams<float>& params);

  // Rows of `obs` are observations; returns one row of action values each.
  Matrix<float> Values(const Matrix<float>& obs) const { return nn::Forward(params_, obs); }

  // One AdamW step on the mean squared 1-step TD error over the first
  // batch.size() rows; the bootstrap is zeroed for terminal rows. The target
  // network is refreshed after every update whose index is a multiple of
  // target_period. Returns the loss before the step.
  double Update(const TransitionBatch& batch);

 private:
  QLearnerConfig config_;
  nn::MlpParams<float> params_;
  nn::MlpParams<float> target_;
  nn::AdamW<float> opt_;
  std::int64_t updates_ = 0;
  nn::ForwardCache<float> cache_;
  nn::ForwardCache<float> target_cache_;
  nn::MlpParams<float> grad_;
  Matrix<float> output_grad_;
};

}  // namespace agent
}  // namespace mbgen

#endif  // MBGEN_AGENT_Q_LEARNER_H_
