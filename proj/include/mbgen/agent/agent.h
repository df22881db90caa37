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

#ifndef MBGEN_AGENT_AGENT_H_
#define MBGEN_AGENT_AGENT_H_

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>

#include "mbgen/agent/dynamics_model.h"
#include "mbgen/agent/q_learner.h"
#include "mbgen/agent/replay.h"
#include "mbgen/env/environment.h"

namespace mbgen {
namespace agent {

enum class AgentKind { kExperienceReplay, kSimpleModel, kPerfectModel };

// "er", "simple-model", "perfect-model".
std::string AgentKindName(AgentKind kind);
AgentKind ParseAgentKind(const std::string& text);

struct AgentConfig {
  AgentKind kind = AgentKind::kExperienceReplay;
  // Transitions fed to each DQN update (real for ER, imagined otherwise).
  int batch_size = 320;
  // Real transitions per model update; also the rollout start count at k=10.
  int model_batch = 32;
  int rollout_length = 10;
  double temperature = 0.1;
  double model_step_size = SimpleDynamicsModel::kDefaultStepSize;
  QLearnerConfig q;
  // When false the dynamics model is never updated (frozen-model study).
  bool train_model = true;
  std::vector<int> model_hidden = {200, 200, 200};
  // Whether imagined rollouts may terminate; false for continuing tasks.
  bool episodic = true;

  // batch_size / rollout_length rollouts per update.
  int rollouts() const { return std::max(1, batch_size / rollout_length); }
};

// Transitions consumed by DQN updates, split by origin.
struct BudgetCounters {
  std::int64_t updates = 0;
  std::int64_t real = 0;
  std::int64_t imagined = 0;
  std::int64_t min_per_update = std::numeric_limits<std::int64_t>::max();
  std::int64_t max_per_update = 0;

  std::int64_t total() const { return real + imagined; }
  void Record(std::int64_t real_count, std::int64_t imagined_count);
};

struct UpdateStats {
  double td_loss = 0.0;
  std::optional<ModelLoss> model_loss;
  int consumed = 0;
};

// A DQN learner plus, for model-based kinds, the rollout model. One update:
//   ER:      sample batch_size transitions, DQN step
//   model:   sample max(rollouts, model_batch) transitions; update the model
//            on the first model_batch; roll out from the first rollouts
//            start states; DQN step on the imagined transitions
class Agent {
 public:
  // `simulator` is required for kPerfectModel and ignored otherwise.
  Agent(int obs_size, int num_actions, AgentConfig config, Rng& rng,
        std::unique_ptr<env::Environment> simulator = nullptr);

  const AgentConfig& config() const { return config_; }
  QLearner& q() { return q_; }
  const QLearner& q() const { return q_; }
  SimpleDynamicsModel* model() { return model_ ? &*model_ : nullptr; }
  const SimpleDynamicsModel* model() const { return model_ ? &*model_ : nullptr; }
  void SetModel(SimpleDynamicsModel model);
  const BudgetCounters& budget() const { return budget_; }
  // Imagined transitions consumed by the most recent model-based update.
  const TransitionBatch& last_imagined() const { return imagined_; }

  int Act(const env::BitObservation& obs, Rng& rng) const;
  int Greedy(const env::BitObservation& obs) const;

  UpdateStats Update(const ReplayBuffer& source, Rng& rng);

 private:
  AgentConfig config_;
  QLearner q_;
  std::optional<SimpleDynamicsModel> model_;
  std::unique_ptr<env::Environment> simulator_;
  BudgetCounters budget_;
  TransitionBatch imagined_;
};

}  // namespace agent
}  // namespace mbgen

#endif  // MBGEN_AGENT_AGENT_H_
