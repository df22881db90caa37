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

#include "mbgen/agent/training.h"

#include <cmath>
#include <stdexcept>

namespace mbgen {
namespace agent {

std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream) {
  // SplitMix64 finalizer over (seed, stream).
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double EvaluateGreedy(const Agent& agent, const env::EnvSpec& spec, std::uint64_t seed,
                      const EvalConfig& eval) {
  auto env = env::MakeEnvironment(spec, seed);
  if (env->episodic()) {
    double total = 0.0;
    for (int e = 0; e < eval.episodes; ++e) {
      env::BitObservation obs = env->Reset();
      for (int t = 0; t < env->episode_cap(); ++t) {
        env::StepResult r = env->Step(agent.Greedy(obs));
        total += r.reward;
        if (r.terminal) break;
        obs = r.obs;
      }
    }
    return total / eval.episodes;
  }
  env::BitObservation obs = env->Reset();
  double total = 0.0;
  for (int t = 0; t < eval.steps; ++t) {
    env::StepResult r = env->Step(agent.Greedy(obs));
    total += r.reward;
    obs = r.obs;
  }
  return total / eval.steps;
}

void ApplyRegime(OnlineConfig& config, const std::string& regime, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("regime scale must be positive");
  if (regime == "high") {
    config.steps = static_cast<std::int64_t>(std::llround(1e6 / scale));
    config.updates_per_step = 1;
  } else if (regime == "low") {
    config.steps = static_cast<std::int64_t>(std::llround(1e5 / scale));
    config.updates_per_step = 10;
  } else {
    throw std::invalid_argument("unknown regime '" + regime + "' (expected high or low)");
  }
}

double FinalScore(const std::vector<MetricsRow>& curve, int window) {
  if (curve.empty()) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t n = std::min<std::size_t>(window, curve.size());
  double sum = 0.0;
  for (std::size_t i = curve.size() - n; i < curve.size(); ++i) sum += curve[i].eval_score;
  return sum / n;
}

RunResult TrainOnline(const OnlineConfig& config) {
  RunResult result;
  // Streams: 0 agent (init, sampling, behaviour), 1 training env,
  // 2 rollout simulator, 100 + i evaluation i.
  Rng rng(DeriveSeed(config.seed, 0));
  auto env = env::MakeEnvironment(config.env, DeriveSeed(config.seed, 1));
  std::unique_ptr<env::Environment> simulator;
  if (config.agent.kind == AgentKind::kPerfectModel) {
    simulator = env->Clone(DeriveSeed(config.seed, 2));
  }
  AgentConfig agent_config = config.agent;
  agent_config.episodic = env->episodic();
  Agent agent(env->observation_size(), env->num_actions(), agent_config, rng,
              std::move(simulator));
  if (config.initial_model) {
    agent.SetModel(SimpleDynamicsModel(*config.initial_model, env->num_actions(),
                                       config.agent.model_step_size));
  }
  ReplayBuffer buffer(config.buffer_capacity, env->observation_size());
  std::size_t next_checkpoint = 0;
  auto checkpoint = [&](std::int64_t update) {
    while (next_checkpoint < config.model_checkpoints.size() &&
           config.model_checkpoints[next_checkpoint] <= update) {
      if (config.on_model_checkpoint && agent.model()) {
        config.on_model_checkpoint(config.model_checkpoints[next_checkpoint], *agent.model());
      }
      ++next_checkpoint;
    }
  };
  checkpoint(0);

  double td_sum = 0, obs_sum = 0, rew_sum = 0, term_sum = 0;
  int since_eval = 0, model_since_eval = 0;
  env::BitObservation obs = env->Reset();
  const std::int64_t total_steps = config.warmup + config.steps;
  std::int64_t eval_index = 0;
  try {
    for (std::int64_t step = 0; step < total_steps; ++step) {
      const int action = agent.Act(obs, rng);
      env::StepResult r = env->Step(action);
      buffer.Add({obs, action, r.reward, r.obs, r.terminal});
      ++result.env_steps;
      obs = r.terminal ? env->Reset() : r.obs;
      if (result.env_steps <= config.warmup) continue;
      for (int u = 0; u < config.updates_per_step; ++u) {
        UpdateStats s = agent.Update(buffer, rng);
        ++result.updates;
        td_sum += s.td_loss;
        ++since_eval;
        if (s.model_loss) {
          obs_sum += s.model_loss->obs;
          rew_sum += s.model_loss->reward;
          term_sum += s.model_loss->term;
          ++model_since_eval;
        }
        checkpoint(result.updates);
        if (result.updates % config.eval_interval == 0) {
          MetricsRow row;
          row.update_index = result.updates;
          row.env_steps = result.env_steps;
          row.eval_score = EvaluateGreedy(agent, config.env,
                                          DeriveSeed(config.seed, 100 + eval_index++),
                                          config.eval);
          row.td_loss = td_sum / since_eval;
          if (model_since_eval > 0) {
            row.model_obs_loss = obs_sum / model_since_eval;
            row.model_reward_loss = rew_sum / model_since_eval;
            row.model_term_loss = term_sum / model_since_eval;
          }
          if (!std::isfinite(row.eval_score) || !std::isfinite(row.td_loss)) {
            throw std::domain_error("non-finite metrics at update " +
                                    std::to_string(result.updates));
          }
          result.curve.push_back(row);
          td_sum = obs_sum = rew_sum = term_sum = 0;
          since_eval = model_since_eval = 0;
          if (row.eval_score >= config.stop_at_score) {
            result.reached_at = result.updates;
            result.budget = agent.budget();
            return result;
          }
        }
      }
    }
  } catch (const std::domain_error& e) {
    result.failed = true;
    result.error = e.what();
  }
  result.budget = agent.budget();
  return result;
}

OfflineResult TrainOffline(const std::vector<env::Transition>& dataset,
                           const OfflineConfig& config) {
  if (dataset.empty()) throw std::invalid_argument("TrainOffline: empty dataset");
  if (config.agent.kind == AgentKind::kPerfectModel) {
    throw std::invalid_argument("TrainOffline: the perfect-model agent is online only");
  }
  const int d = static_cast<int>(dataset[0].obs.size());
  ReplayBuffer buffer(dataset.size(), d);
  int actions = config.num_actions;
  for (const env::Transition& t : dataset) {
    buffer.Add(t);
    actions = std::max(actions, t.action + 1);
  }
  Rng rng(DeriveSeed(config.seed, 0));
  Agent agent(d, std::max(actions, 1), config.agent, rng);
  for (std::int64_t u = 0; u < config.updates; ++u) agent.Update(buffer, rng);
  OfflineResult out{agent.q().params(), std::nullopt, agent.budget()};
  if (agent.model()) out.model = agent.model()->params();
  return out;
}

}  // namespace agent
}  // namespace mbgen
