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

#include "mbgen/probe/smoothing.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "mbgen/agent/replay.h"
#include "mbgen/env/panflute.h"

namespace mbgen {
namespace probe {

TransitionPredictor ModelPredictor(const agent::SimpleDynamicsModel& model) {
  return [&model](const nn::Matrix<float>& obs, const std::vector<int>& actions) {
    return model.Predict(obs, actions);
  };
}

TransitionPredictor GroundTruthPredictor(int pipes) {
  return [pipes](const nn::Matrix<float>& obs, const std::vector<int>& actions) {
    agent::ModelPrediction p;
    p.next_feature_probs.resize(obs.rows(), obs.cols());
    for (Eigen::Index i = 0; i < obs.rows(); ++i) {
      env::BitObservation o(obs.cols());
      for (Eigen::Index j = 0; j < obs.cols(); ++j) o.Set(j, obs(i, j) > 0.5f);
      const env::BitObservation next = env::PanFlute::Propagate(pipes, o, actions[i]);
      for (Eigen::Index j = 0; j < obs.cols(); ++j) p.next_feature_probs(i, j) = next[j];
      p.reward_mean.push_back(env::PanFlute::AllEndsActive(pipes, o) ? 1.0f : 0.0f);
      p.termination_prob.push_back(0.0f);
    }
    return p;
  };
}

SmoothingProfile SmoothingProbe(const TransitionPredictor& predictor, int pipes,
                                const SmoothingConfig& config) {
  if (config.steps < 1 || config.batch < 1) throw std::invalid_argument("smoothing: empty corpus");
  env::PanFlute flute(pipes, config.seed, {.disable_spontaneous = config.disable_spontaneous});
  std::mt19937_64 rng(config.seed ^ 0x5bd1e995ULL);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> uniform(0, pipes - 1);
  std::vector<int> ends;
  for (int k = 0; k < pipes; ++k) ends.push_back(env::PanFlute::EndIndex(pipes, k));

  SmoothingProfile profile;
  profile.pipes = pipes;
  std::vector<double> reward_sum(pipes + 1, 0.0), next_sum(pipes + 1, 0.0);
  profile.reward_count.assign(pipes + 1, 0);
  profile.next_count.assign(pipes + 1, 0);

  env::BitObservation obs = flute.Reset();
  int action = pipes - 1;
  std::vector<env::Transition> chunk;
  auto flush = [&] {
    if (chunk.empty()) return;
    agent::TransitionBatch batch = agent::TransitionBatch::FromTransitions(chunk);
    agent::ModelPrediction p = predictor(batch.obs, batch.action);
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      const int now = env::PanFlute::ActiveEnds(pipes, chunk[i].obs);
      const int next = env::PanFlute::ActiveEnds(pipes, chunk[i].next_obs);
      double all = 1.0;
      for (int e : ends) all *= p.next_feature_probs(i, e);
      reward_sum[now] += p.reward_mean[i];
      ++profile.reward_count[now];
      next_sum[next] += all;
      ++profile.next_count[next];
    }
    chunk.clear();
  };
  for (std::int64_t t = 0; t < config.steps; ++t) {
    action = coin(rng) < config.successor_probability ? (action + 1) % pipes : uniform(rng);
    env::StepResult r = flute.Step(action);
    chunk.push_back({obs, action, r.reward, r.obs, false});
    obs = r.obs;
    if (static_cast<int>(chunk.size()) == config.batch) flush();
  }
  flush();
  for (int b = 0; b <= pipes; ++b) {
    profile.reward_mean.push_back(profile.reward_count[b] ? reward_sum[b] / profile.reward_count[b]
                                                          : std::nan(""));
    profile.all_next_mean.push_back(profile.next_count[b] ? next_sum[b] / profile.next_count[b]
                                                          : std::nan(""));
  }
  return profile;
}

void WriteSmoothingCsv(const SmoothingProfile& p, std::ostream& out) {
  out << "bin,reward_count,mean_predicted_reward,next_count,mean_all_ends_next\n";
  for (int b = 0; b <= p.pipes; ++b) {
    out << b << ',' << p.reward_count[b] << ',';
    if (p.reward_count[b]) out << p.reward_mean[b];
    out << ',' << p.next_count[b] << ',';
    if (p.next_count[b]) out << p.all_next_mean[b];
    out << '\n';
  }
}

MonotonicityReport RewardMonotonicity(const SmoothingProfile& p, double tolerance) {
  MonotonicityReport r;
  double prev = std::nan("");
  for (int b = 0; b <= p.pipes; ++b) {
    if (!p.reward_count[b]) continue;
    if (std::isfinite(prev)) {
      const double drop = prev - p.reward_mean[b];
      r.largest_drop = std::max(r.largest_drop, drop);
      if (drop > tolerance) ++r.inversions;
    }
    prev = p.reward_mean[b];
  }
  return r;
}

}  // namespace probe
}  // namespace mbgen
