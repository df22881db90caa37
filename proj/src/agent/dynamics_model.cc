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

#include "mbgen/agent/dynamics_model.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mbgen/agent/policy.h"
#include "mbgen/nn/losses.h"

namespace mbgen {
namespace agent {
namespace {

std::vector<int> SampleActions(const RolloutPolicy& policy, const Matrix<float>& obs,
                               Rng& rng) {
  Matrix<float> q = policy.q->Values(obs);
  std::vector<int> actions(obs.rows());
  for (Eigen::Index i = 0; i < obs.rows(); ++i) {
    actions[i] = SoftmaxAction(std::span<const float>(q.row(i).data(), q.cols()),
                               policy.temperature, rng);
  }
  return actions;
}

}  // namespace

nn::Architecture SimpleDynamicsModel::MakeArchitecture(int obs_size, int num_actions,
                                                       std::vector<int> hidden) {
  return {obs_size + num_actions, std::move(hidden), {obs_size, 1, 1}};
}

SimpleDynamicsModel::SimpleDynamicsModel(int obs_size, int num_actions, Rng& rng,
                                         double step_size, std::vector<int> hidden)
    : SimpleDynamicsModel(
          nn::InitMlp<float>(MakeArchitecture(obs_size, num_actions, std::move(hidden)), rng),
          num_actions, step_size) {}

SimpleDynamicsModel::SimpleDynamicsModel(nn::MlpParams<float> params, int num_actions,
                                         double step_size)
    : obs_size_(params.arch().input - num_actions),
      num_actions_(num_actions),
      params_(std::move(params)),
      opt_(params_.size(), {.step_size = step_size}),
      grad_(params_.ZerosLike()) {
  const auto& arch = params_.arch();
  if (obs_size_ <= 0 || arch.heads.size() != 3 || arch.heads[0] != obs_size_ ||
      arch.heads[1] != 1 || arch.heads[2] != 1) {
    throw std::invalid_argument("SimpleDynamicsModel: parameters do not match obs/action sizes");
  }
}

Matrix<float> SimpleDynamicsModel::Inputs(const Matrix<float>& obs,
                                          const std::vector<int>& actions) const {
  const Eigen::Index n = static_cast<Eigen::Index>(actions.size());
  Matrix<float> x = Matrix<float>::Zero(n, obs_size_ + num_actions_);
  x.leftCols(obs_size_) = obs.topRows(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (actions[i] < 0 || actions[i] >= num_actions_) {
      throw std::out_of_range("SimpleDynamicsModel: action out of range");
    }
    x(i, obs_size_ + actions[i]) = 1.0f;
  }
  return x;
}

Matrix<float> SimpleDynamicsModel::Logits(const Matrix<float>& obs,
                                          const std::vector<int>& actions) const {
  return nn::Forward(params_, Inputs(obs, actions));
}

ModelPrediction SimpleDynamicsModel::Predict(const Matrix<float>& obs,
                                             const std::vector<int>& actions) const {
  Matrix<float> out = Logits(obs, actions);
  ModelPrediction p;
  p.next_feature_probs = out.leftCols(obs_size_).unaryExpr([](float z) { return nn::Sigmoid(z); });
  p.reward_mean.resize(out.rows());
  p.termination_prob.resize(out.rows());
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    p.reward_mean[i] = out(i, obs_size_);
    p.termination_prob[i] = nn::Sigmoid(out(i, obs_size_ + 1));
  }
  return p;
}

ModelLoss SimpleDynamicsModel::Update(const TransitionBatch& batch) {
  const int n = batch.size();
  if (n == 0) throw std::invalid_argument("SimpleDynamicsModel::Update: empty batch");
  nn::Forward(params_, Inputs(batch.obs, batch.action), cache_);
  const Matrix<float>& out = cache_.output;
  Matrix<float> reward_target(n, 1), term_target(n, 1);
  for (int i = 0; i < n; ++i) {
    reward_target(i, 0) = batch.reward[i];
    term_target(i, 0) = batch.terminal[i];
  }
  auto obs_loss = nn::BernoulliLogitsLoss<float>(out.leftCols(obs_size_),
                                                 batch.next_obs.topRows(n));
  auto reward_loss = nn::MseLoss<float>(out.col(obs_size_), reward_target);
  auto term_loss = nn::BernoulliLogitsLoss<float>(out.col(obs_size_ + 1), term_target);
  ModelLoss loss{obs_loss.value, reward_loss.value, term_loss.value};
  if (!std::isfinite(loss.total())) {
    throw std::domain_error("SimpleDynamicsModel: non-finite loss at update " +
                            std::to_string(updates() + 1));
  }
  Matrix<float> grad(n, obs_size_ + 2);
  grad.leftCols(obs_size_) = obs_loss.grad;
  grad.col(obs_size_) = reward_loss.grad;
  grad.col(obs_size_ + 1) = term_loss.grad;
  grad_.SetZero();
  nn::Backward(params_, cache_, grad, &grad_);
  opt_.Step(params_, grad_);
  return loss;
}

void ModelRollout(const SimpleDynamicsModel& model, const Matrix<float>& starts, int length,
                  const RolloutPolicy& policy, Rng& rng, TransitionBatch* out,
                  bool sample_termination) {
  if (length < 1) throw std::invalid_argument("rollout length must be at least 1");
  const int d = model.obs_size();
  Matrix<float> cur = starts;
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  for (int step = 0; step < length && cur.rows() > 0; ++step) {
    std::vector<int> actions = SampleActions(policy, cur, rng);
    ModelPrediction p = model.Predict(cur, actions);
    Matrix<float> next(cur.rows(), d);
    std::vector<Eigen::Index> alive;
    for (Eigen::Index i = 0; i < cur.rows(); ++i) {
      for (int j = 0; j < d; ++j) next(i, j) = u(rng) < p.next_feature_probs(i, j) ? 1.0f : 0.0f;
      const bool term = sample_termination && u(rng) < p.termination_prob[i];
      out->Append(cur.row(i).data(), actions[i], p.reward_mean[i], next.row(i).data(), term);
      if (!term) alive.push_back(i);
    }
    cur = next(alive, Eigen::all);
  }
}

void PerfectRollout(env::Environment& simulator, const Matrix<float>& starts, int length,
                    const RolloutPolicy& policy, Rng& rng, TransitionBatch* out) {
  if (length < 1) throw std::invalid_argument("rollout length must be at least 1");
  const int d = simulator.observation_size();
  if (starts.cols() != d) throw std::invalid_argument("PerfectRollout: observation width");
  Matrix<float> cur = starts;
  std::vector<std::uint8_t> bits(d);
  for (int step = 0; step < length && cur.rows() > 0; ++step) {
    std::vector<int> actions = SampleActions(policy, cur, rng);
    Matrix<float> next(cur.rows(), d);
    std::vector<Eigen::Index> alive;
    for (Eigen::Index i = 0; i < cur.rows(); ++i) {
      for (int j = 0; j < d; ++j) bits[j] = cur(i, j) > 0.5f;
      simulator.SetStateFromObservation(env::BitObservation(bits));
      env::StepResult r = simulator.Step(actions[i]);
      for (int j = 0; j < d; ++j) next(i, j) = r.obs[j];
      out->Append(cur.row(i).data(), actions[i], static_cast<float>(r.reward),
                  next.row(i).data(), r.terminal);
      if (!r.terminal) alive.push_back(i);
    }
    cur = next(alive, Eigen::all);
  }
}

}  // namespace agent
}  // namespace mbgen
