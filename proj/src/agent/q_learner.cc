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

#include "mbgen/agent/q_learner.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mbgen {
namespace agent {

QLearner::QLearner(int obs_size, int num_actions, QLearnerConfig config, Rng& rng)
    : config_(config),
      params_(nn::InitMlp<float>({obs_size, config.hidden, {num_actions}}, rng)),
      target_(params_),
      opt_(params_.size(), {.step_size = config.step_size}),
      grad_(params_.ZerosLike()) {
  if (config.target_period <= 0) throw std::invalid_argument("target_period must be positive");
}

void QLearner::SetParams(const nn::MlpParams<float>& params) {
  if (!(params.arch() == params_.arch())) {
    throw std::invalid_argument("QLearner: parameter shape mismatch");
  }
  params_ = params;
  target_ = params;
}

double QLearner::Update(const TransitionBatch& batch) {
  const int n = batch.size();
  if (n == 0) throw std::invalid_argument("QLearner::Update: empty batch");
  nn::Forward(target_, batch.next_obs.topRows(n), target_cache_);
  const Matrix<float>& next_q = target_cache_.output;
  nn::Forward(params_, batch.obs.topRows(n), cache_);
  Matrix<float>& grad = output_grad_;
  grad.setZero(n, num_actions());
  double loss = 0.0;
  const float gamma = static_cast<float>(config_.discount);
  for (int i = 0; i < n; ++i) {
    const float bootstrap = batch.terminal[i] ? 0.0f : gamma * next_q.row(i).maxCoeff();
    const float target = batch.reward[i] + bootstrap;
    const float err = cache_.output(i, batch.action[i]) - target;
    loss += static_cast<double>(err) * err;
    grad(i, batch.action[i]) = 2.0f * err / n;
  }
  loss /= n;
  if (!std::isfinite(loss)) {
    throw std::domain_error("QLearner: non-finite TD loss at update " +
                            std::to_string(updates_ + 1));
  }
  grad_.SetZero();
  nn::Backward(params_, cache_, grad, &grad_);
  opt_.Step(params_, grad_);
  ++updates_;
  if (updates_ % config_.target_period == 0) target_ = params_;
  return loss;
}

}  // namespace agent
}  // namespace mbgen
