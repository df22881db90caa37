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

#ifndef MBGEN_AGENT_DYNAMICS_MODEL_H_
#define MBGEN_AGENT_DYNAMICS_MODEL_H_

#include <memory>

#include "mbgen/agent/q_learner.h"
#include "mbgen/agent/replay.h"
#include "mbgen/env/environment.h"
#include "mbgen/nn/adamw.h"
#include "mbgen/nn/mlp.h"

namespace mbgen {
namespace agent {

struct ModelLoss {
  double obs = 0.0;
  double reward = 0.0;
  double term = 0.0;

  double total() const { return obs + reward + term; }
};

// Post-sigmoid predictions for a batch of (obs, action) rows.
struct ModelPrediction {
  Matrix<float> next_feature_probs;
  std::vector<float> reward_mean;
  std::vector<float> termination_prob;
};

// Feedforward network from [obs | one-hot action] to three heads:
// next-observation logits, reward mean, termination logit.
class SimpleDynamicsModel {
 public:
  static constexpr double kDefaultStepSize = 2e-4;

  SimpleDynamicsModel(int obs_size, int num_actions, Rng& rng,
                      double step_size = kDefaultStepSize,
                      std::vector<int> hidden = {200, 200, 200});
  // Wraps existing parameters (e.g. a frozen checkpoint).
  SimpleDynamicsModel(nn::MlpParams<float> params, int num_actions,
                      double step_size = kDefaultStepSize);

  int obs_size() const { return obs_size_; }
  int num_actions() const { return num_actions_; }
  const nn::MlpParams<float>& params() const { return params_; }
  std::int64_t updates() const { return opt_.step_count(); }

  static nn::Architecture MakeArchitecture(int obs_size, int num_actions,
                                           std::vector<int> hidden = {200, 200, 200});

  Matrix<float> Inputs(const Matrix<float>& obs, const std::vector<int>& actions) const;
  // Raw head outputs, one row per input row: obs_size logits, reward, term.
  Matrix<float> Logits(const Matrix<float>& obs, const std::vector<int>& actions) const;
  ModelPrediction Predict(const Matrix<float>& obs, const std::vector<int>& actions) const;

  // One AdamW step on Bernoulli NLL (next bits) + MSE (reward) + Bernoulli
  // NLL (terminal) over the first batch.size() rows.
  ModelLoss Update(const TransitionBatch& batch);

 private:
  int obs_size_;
  int num_actions_;
  nn::MlpParams<float> params_;
  nn::AdamW<float> opt_;
  nn::ForwardCache<float> cache_;
  nn::MlpParams<float> grad_;
};

// Action selection inside imagined rollouts.
struct RolloutPolicy {
  const QLearner* q = nullptr;
  double temperature = 1.0;
};

// Rolls each start row forward up to `length` steps through the learned
// model, appending imagined transitions to *out. Actions are softmax samples
// from the Q-network, next bits independent Bernoulli draws, reward the
// predicted mean; a sampled termination ends that rollout. With
// `sample_termination` false (continuing environments) the termination head
// is ignored and every rollout runs its full length.
void ModelRollout(const SimpleDynamicsModel& model, const Matrix<float>& starts, int length,
                  const RolloutPolicy& policy, Rng& rng, TransitionBatch* out,
                  bool sample_termination = true);

// Same contract, stepping a simulator decoded from each observation.
void PerfectRollout(env::Environment& simulator, const Matrix<float>& starts, int length,
                    const RolloutPolicy& policy, Rng& rng, TransitionBatch* out);

}  // namespace agent
}  // namespace mbgen

#endif  // MBGEN_AGENT_DYNAMICS_MODEL_H_
