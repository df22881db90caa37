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

#include "mbgen/agent/agent.h"

#include <stdexcept>

#include "mbgen/agent/policy.h"

namespace mbgen {
namespace agent {
namespace {

Matrix<float> RowMatrix(const env::BitObservation& obs) {
  Matrix<float> m(1, obs.size());
  for (std::size_t j = 0; j < obs.size(); ++j) m(0, j) = obs[j];
  return m;
}

}  // namespace

std::string AgentKindName(AgentKind kind) {
  switch (kind) {
    case AgentKind::kExperienceReplay:
      return "er";
    case AgentKind::kSimpleModel:
      return "simple-model";
    case AgentKind::kPerfectModel:
      return "perfect-model";
  }
  return "?";
}

AgentKind ParseAgentKind(const std::string& text) {
  if (text == "er" || text == "model-free") return AgentKind::kExperienceReplay;
  if (text == "simple-model") return AgentKind::kSimpleModel;
  if (text == "perfect-model") return AgentKind::kPerfectModel;
  throw std::invalid_argument("unknown agent '" + text +
                              "' (expected er, simple-model, perfect-model)");
}

void BudgetCounters::Record(std::int64_t real_count, std::int64_t imagined_count) {
  ++updates;
  real += real_count;
  imagined += imagined_count;
  const std::int64_t n = real_count + imagined_count;
  min_per_update = std::min(min_per_update, n);
  max_per_update = std::max(max_per_update, n);
}

Agent::Agent(int obs_size, int num_actions, AgentConfig config, Rng& rng,
             std::unique_ptr<env::Environment> simulator)
    : config_(config), q_(obs_size, num_actions, config.q, rng), simulator_(std::move(simulator)) {
  if (config_.batch_size <= 0 || config_.model_batch <= 0 || config_.rollout_length <= 0) {
    throw std::invalid_argument("Agent: batch sizes and rollout length must be positive");
  }
  if (config_.kind == AgentKind::kSimpleModel) {
    model_.emplace(obs_size, num_actions, rng, config_.model_step_size, config_.model_hidden);
  }
  if (config_.kind == AgentKind::kPerfectModel && !simulator_) {
    throw std::invalid_argument("Agent: the perfect-model agent needs a simulator");
  }
}

void Agent::SetModel(SimpleDynamicsModel model) {
  if (config_.kind != AgentKind::kSimpleModel) {
    throw std::logic_error("Agent::SetModel: only the simple-model agent has a model");
  }
  if (model.obs_size() != q_.obs_size() || model.num_actions() != q_.num_actions()) {
    throw std::invalid_argument("Agent::SetModel: model shape mismatch");
  }
  model_.emplace(std::move(model));
}

int Agent::Act(const env::BitObservation& obs, Rng& rng) const {
  Matrix<float> q = q_.Values(RowMatrix(obs));
  return SoftmaxAction(std::span<const float>(q.data(), q.cols()), config_.temperature, rng);
}

int Agent::Greedy(const env::BitObservation& obs) const {
  Matrix<float> q = q_.Values(RowMatrix(obs));
  return GreedyAction(std::span<const float>(q.data(), q.cols()));
}

UpdateStats Agent::Update(const ReplayBuffer& source, Rng& rng) {
  UpdateStats stats;
  if (config_.kind == AgentKind::kExperienceReplay) {
    TransitionBatch batch = source.Sample(config_.batch_size, rng);
    stats.td_loss = q_.Update(batch);
    stats.consumed = batch.size();
    budget_.Record(batch.size(), 0);
    return stats;
  }
  const int rollouts = config_.rollouts();
  const bool learned = config_.kind == AgentKind::kSimpleModel;
  const int draw = learned && config_.train_model ? std::max(rollouts, config_.model_batch)
                                                  : rollouts;
  TransitionBatch real = source.Sample(draw, rng);
  if (learned && config_.train_model) {
    TransitionBatch model_batch = real;
    model_batch.obs.conservativeResize(config_.model_batch, Eigen::NoChange);
    model_batch.next_obs.conservativeResize(config_.model_batch, Eigen::NoChange);
    model_batch.action.resize(config_.model_batch);
    model_batch.reward.resize(config_.model_batch);
    model_batch.terminal.resize(config_.model_batch);
    stats.model_loss = model_->Update(model_batch);
  }
  imagined_.Reserve(config_.batch_size, q_.obs_size());
  const RolloutPolicy policy{&q_, config_.temperature};
  Matrix<float> starts = real.obs.topRows(rollouts);
  if (learned) {
    ModelRollout(*model_, starts, config_.rollout_length, policy, rng, &imagined_,
                 config_.episodic);
  } else {
    PerfectRollout(*simulator_, starts, config_.rollout_length, policy, rng, &imagined_);
  }
  stats.td_loss = q_.Update(imagined_);
  stats.consumed = imagined_.size();
  budget_.Record(0, imagined_.size());
  return stats;
}

}  // namespace agent
}  // namespace mbgen
