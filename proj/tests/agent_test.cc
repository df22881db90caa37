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

#include <cmath>
#include <set>

#include "gtest/gtest.h"
#include "mbgen/agent/agent.h"
#include "mbgen/agent/dynamics_model.h"
#include "mbgen/agent/policy.h"
#include "mbgen/agent/q_learner.h"
#include "mbgen/agent/replay.h"
#include "mbgen/agent/training.h"
#include "mbgen/env/illustrative_maze.h"
#include "mbgen/env/opengrid.h"
#include "mbgen/env/panflute.h"

namespace mbgen {
namespace agent {
namespace {

using env::BitObservation;
using env::Transition;

double ChiSquare(const std::vector<int>& counts, const std::vector<double>& probs, int n) {
  double chi = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double e = probs[i] * n;
    chi += (counts[i] - e) * (counts[i] - e) / e;
  }
  return chi;
}

Matrix<float> Row(std::initializer_list<float> values) {
  Matrix<float> m(1, values.size());
  int j = 0;
  for (float v : values) m(0, j++) = v;
  return m;
}

// Every (state, action) transition of the 3-pipe flute without spontaneous
// events; the model should learn these exactly.
std::vector<Transition> AllFluteTransitions() {
  std::vector<Transition> out;
  for (int code = 0; code < 64; ++code) {
    BitObservation obs(6);
    for (int j = 0; j < 6; ++j) obs.Set(j, (code >> j) & 1);
    for (int a = 0; a < 3; ++a) {
      out.push_back({obs, a, env::PanFlute::AllEndsActive(3, obs) ? 1.0 : 0.0,
                     env::PanFlute::Propagate(3, obs, a), false});
    }
  }
  return out;
}

ReplayBuffer BufferOf(const std::vector<Transition>& data) {
  ReplayBuffer buffer(data.size(), static_cast<int>(data[0].obs.size()));
  for (const Transition& t : data) buffer.Add(t);
  return buffer;
}

const SimpleDynamicsModel& TrainedFluteModel() {
  static const SimpleDynamicsModel* model = [] {
    Rng rng(5);
    auto* m = new SimpleDynamicsModel(6, 3, rng, 3e-3, {64, 64});
    ReplayBuffer buffer = BufferOf(AllFluteTransitions());
    for (int i = 0; i < 4000; ++i) m->Update(buffer.Sample(32, rng));
    return m;
  }();
  return *model;
}

// Softmax -------------------------------------------------------------------

TEST(SoftmaxTest, EqualValuesAreUniform) {
  Rng rng(1);
  std::vector<float> q(5, 0.3f);
  std::vector<int> counts(5, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[SoftmaxAction(q, 0.7, rng)];
  // 4 degrees of freedom, 0.1% critical value.
  EXPECT_LT(ChiSquare(counts, std::vector<double>(5, 0.2), n), 18.47);
}

TEST(SoftmaxTest, LowTemperatureIsNearlyGreedy) {
  Rng rng(2);
  std::vector<float> q = {0.5f, 0.2f, 0.49f};
  int hits = 0;
  for (int i = 0; i < 100000; ++i) hits += SoftmaxAction(q, 0.001, rng) == 0;
  EXPECT_GE(hits, 99900);
}

TEST(SoftmaxTest, TwoActionClosedForm) {
  std::vector<float> q = {1.0f, 0.0f};
  const double expected = std::exp(1.0) / (std::exp(1.0) + 1.0);
  EXPECT_NEAR(SoftmaxProbabilities(q, 1.0)[0], expected, 1e-12);
  Rng rng(3);
  int hits = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) hits += SoftmaxAction(q, 1.0, rng) == 0;
  EXPECT_NEAR(static_cast<double>(hits) / n, expected,
              4 * std::sqrt(expected * (1 - expected) / n));
}

TEST(SoftmaxTest, ScaleIdentityAndRejection) {
  std::vector<float> q = {0.25f, -1.5f, 3.0f, 0.0f};
  for (float c : {0.5f, 2.0f, 3.0f, 10.0f}) {
    std::vector<float> scaled;
    for (float v : q) scaled.push_back(c * v);
    auto a = SoftmaxProbabilities(q, 0.8), b = SoftmaxProbabilities(scaled, c * 0.8);
    for (std::size_t i = 0; i < q.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-6);
  }
  Rng rng(4);
  EXPECT_THROW(SoftmaxAction(q, 0.0, rng), std::invalid_argument);
  EXPECT_THROW(SoftmaxAction(q, -1.0, rng), std::invalid_argument);
  EXPECT_EQ(GreedyAction(std::vector<float>{1.0f, 3.0f, 3.0f}), 1);
}

// Replay --------------------------------------------------------------------

Transition Tagged(int i) {
  BitObservation obs(8);
  for (int j = 0; j < 8; ++j) obs.Set(j, (i >> j) & 1);
  return {obs, i % 3, static_cast<double>(i), obs, false};
}

TEST(ReplayBufferTest, RingDropsOldest) {
  ReplayBuffer buffer(10, 8);
  for (int i = 0; i < 13; ++i) buffer.Add(Tagged(i));
  EXPECT_EQ(buffer.size(), 10u);
  EXPECT_EQ(buffer.inserted(), 13);
  std::set<double> present;
  for (std::size_t i = 0; i < buffer.size(); ++i) present.insert(buffer.Get(i).reward);
  for (int i = 0; i < 3; ++i) EXPECT_FALSE(present.count(i));
  EXPECT_EQ(buffer.Get(0), Tagged(3));
  EXPECT_EQ(buffer.Get(9), Tagged(12));
  EXPECT_THROW(buffer.Get(10), std::out_of_range);
}

TEST(ReplayBufferTest, SamplingIsUniform) {
  ReplayBuffer buffer(10, 8);
  for (int i = 0; i < 25; ++i) buffer.Add(Tagged(i));
  Rng rng(5);
  std::vector<int> counts(10, 0);
  const int n = 100000;
  TransitionBatch batch = buffer.Sample(n, rng);
  for (int i = 0; i < n; ++i) ++counts[static_cast<int>(batch.reward[i]) - 15];
  // 9 degrees of freedom, 0.1% critical value.
  EXPECT_LT(ChiSquare(counts, std::vector<double>(10, 0.1), n), 27.88);
  EXPECT_EQ(batch.Row(0).obs.size(), 8u);
}

TEST(ReplayBufferTest, BatchRoundTrip) {
  std::vector<Transition> data = {Tagged(1), Tagged(2), Tagged(200)};
  TransitionBatch batch = TransitionBatch::FromTransitions(data);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(batch.Row(i), data[i]);
}

// DQN -----------------------------------------------------------------------

TransitionBatch Repeated(const Transition& t, int n) {
  return TransitionBatch::FromTransitions(std::vector<Transition>(n, t));
}

TEST(QLearnerTest, TerminalTargetIsReward) {
  Rng rng(6);
  QLearner q(2, 2, {.step_size = 1e-3, .target_period = 1000000, .hidden = {16, 16}}, rng);
  BitObservation s = BitObservation::FromString("10");
  TransitionBatch batch = Repeated({s, 1, 0.7, BitObservation::FromString("01"), true}, 32);
  for (int i = 0; i < 3000; ++i) q.Update(batch);
  EXPECT_NEAR(q.Values(Row({1, 0}))(0, 1), 0.7, 1e-3);
}

TEST(QLearnerTest, ConvergesToOneStepFixedPoint) {
  Rng rng(7);
  QLearner q(2, 2, {.step_size = 1e-3, .target_period = 1000000, .hidden = {16, 16}}, rng);
  const double expected = 0.5 + 0.9 * nn::Forward(q.target_params(), Row({0, 1})).maxCoeff();
  TransitionBatch batch = Repeated(
      {BitObservation::FromString("10"), 0, 0.5, BitObservation::FromString("01"), false}, 32);
  for (int i = 0; i < 3000; ++i) q.Update(batch);
  EXPECT_NEAR(q.Values(Row({1, 0}))(0, 0), expected, 1e-3);
}

TEST(QLearnerTest, TargetChangesOnlyOnSchedule) {
  Rng rng(8);
  QLearner q(4, 3, {.step_size = 1e-3, .target_period = 100, .hidden = {8}}, rng);
  ReplayBuffer buffer(50, 4);
  for (int i = 0; i < 50; ++i) {
    BitObservation a(4), b(4);
    a.Set(i % 4, true);
    b.Set((i + 1) % 4, true);
    buffer.Add({a, i % 3, (i % 5) * 0.1, b, i % 7 == 0});
  }
  nn::MlpParams<float> before = q.target_params();
  for (int u = 1; u <= 250; ++u) {
    q.Update(buffer.Sample(16, rng));
    const bool changed = !(q.target_params() == before);
    EXPECT_EQ(changed, u % 100 == 0) << "update " << u;
    if (u % 100 == 0) {
      EXPECT_EQ(q.target_params(), q.params());
    }
    before = q.target_params();
  }
}

TEST(QLearnerTest, RejectsEmptyBatch) {
  Rng rng(9);
  QLearner q(2, 2, {.hidden = {4}}, rng);
  TransitionBatch empty;
  EXPECT_THROW(q.Update(empty), std::invalid_argument);
}

// Model ---------------------------------------------------------------------

TEST(DynamicsModelTest, LearnsDeterministicDynamics) {
  const SimpleDynamicsModel& model = TrainedFluteModel();
  std::vector<Transition> data = AllFluteTransitions();
  TransitionBatch batch = TransitionBatch::FromTransitions(data);
  ModelPrediction p = model.Predict(batch.obs, batch.action);
  double worst = 0;
  for (int i = 0; i < batch.size(); ++i) {
    for (int j = 0; j < 6; ++j) {
      worst = std::max<double>(worst, std::abs(p.next_feature_probs(i, j) - batch.next_obs(i, j)));
    }
    EXPECT_NEAR(p.reward_mean[i], batch.reward[i], 0.1);
    EXPECT_LT(p.termination_prob[i], 0.01);
  }
  EXPECT_LT(worst, 0.01);
}

TEST(DynamicsModelTest, ConstantRewardAndLossBreakdown) {
  Rng rng(10);
  env::OpenGrid grid(3, 10);
  std::vector<Transition> data;
  BitObservation obs = grid.Reset();
  for (int i = 0; i < 500; ++i) {
    int a = static_cast<int>(rng() % 4);
    env::StepResult r = grid.Step(a);
    data.push_back({obs, a, r.reward, r.obs, r.terminal});
    obs = r.terminal ? grid.Reset() : r.obs;
  }
  ReplayBuffer buffer = BufferOf(data);
  SimpleDynamicsModel model(9, 4, rng, 1e-3, {32, 32});
  ModelLoss last;
  for (int i = 0; i < 2000; ++i) {
    last = model.Update(buffer.Sample(32, rng));
    ASSERT_GE(last.obs, 0.0);
    ASSERT_GE(last.reward, 0.0);
    ASSERT_GE(last.term, 0.0);
  }
  EXPECT_LT(last.reward, 1e-3);
}

TEST(RolloutTest, OneStepRolloutsStartAtBufferStates) {
  const SimpleDynamicsModel& model = TrainedFluteModel();
  Rng rng(11);
  QLearner q(6, 3, {.hidden = {8}}, rng);
  ReplayBuffer buffer = BufferOf(AllFluteTransitions());
  TransitionBatch real = buffer.Sample(320, rng);
  TransitionBatch out;
  out.Reserve(320, 6);
  ModelRollout(model, real.obs, 1, {&q, 1.0}, rng, &out);
  ASSERT_EQ(out.size(), 320);
  EXPECT_TRUE(out.obs.topRows(320) == real.obs);
  for (int i = 0; i < out.size(); ++i) {
    for (int j = 0; j < 6; ++j) {
      ASSERT_TRUE(out.next_obs(i, j) == 0.0f || out.next_obs(i, j) == 1.0f);
    }
  }
}

TEST(RolloutTest, FittedModelFollowsRealGreedyTrajectory) {
  const SimpleDynamicsModel& model = TrainedFluteModel();
  Rng rng(12);
  QLearner q(6, 3, {.hidden = {16}}, rng);
  TransitionBatch out;
  out.Reserve(10, 6);
  // The all-zero state gives tied Q-values at init, so start one step in.
  env::PanFlute real(3, 0, {.disable_spontaneous = true});
  real.Reset();
  BitObservation obs = real.Step(0).obs;
  Matrix<float> start = TransitionBatch::FromTransitions({{obs, 0, 0, obs, false}}).obs;
  ModelRollout(model, start, 10, {&q, 1e-4}, rng, &out);
  ASSERT_EQ(out.size(), 10);
  for (int i = 0; i < 10; ++i) {
    const int a = out.action[i];
    Matrix<float> qv = q.Values(TransitionBatch::FromTransitions({{obs, 0, 0, obs, false}}).obs);
    EXPECT_EQ(a, GreedyAction(std::span<const float>(qv.data(), 3)));
    obs = real.Step(a).obs;
    EXPECT_EQ(out.Row(i).next_obs, obs) << "step " << i;
  }
}

TEST(PerfectRolloutTest, DeterministicEnvMatchesRealTransitions) {
  Rng rng(13);
  QLearner q(6, 3, {.hidden = {8}}, rng);
  env::PanFlute sim(3, 1, {.disable_spontaneous = true});
  ReplayBuffer buffer = BufferOf(AllFluteTransitions());
  TransitionBatch out;
  out.Reserve(320, 6);
  PerfectRollout(sim, buffer.Sample(32, rng).obs, 10, {&q, 1.0}, rng, &out);
  ASSERT_EQ(out.size(), 320);
  for (int i = 0; i < out.size(); ++i) {
    Transition t = out.Row(i);
    EXPECT_EQ(t.next_obs, env::PanFlute::Propagate(3, t.obs, t.action));
    EXPECT_EQ(t.reward, env::PanFlute::AllEndsActive(3, t.obs) ? 1.0 : 0.0);
  }
}

TEST(PerfectRolloutTest, SpontaneousRateInImaginedSteps) {
  Rng rng(14);
  QLearner q(6, 3, {.hidden = {4}}, rng);
  env::PanFlute sim(3, 2);
  ReplayBuffer buffer = BufferOf(AllFluteTransitions());
  TransitionBatch out;
  std::int64_t steps = 0;
  for (int call = 0; call < 3200; ++call) {
    out.Reserve(320, 6);
    PerfectRollout(sim, buffer.Sample(32, rng).obs, 10, {&q, 1.0}, rng, &out);
    steps += out.size();
  }
  const double p = 1.0 / 9;
  EXPECT_LE(std::abs(sim.spontaneous_events() - steps * p), 3 * std::sqrt(steps * p * (1 - p)));
}

TEST(PerfectRolloutTest, OneStepOutcomesMatchRealEnvironment) {
  Rng rng(15);
  QLearner q(9, 4, {.hidden = {4}}, rng);
  env::OpenGrid sim(3, 3), real(3, 4);
  Matrix<float> starts = Matrix<float>::Zero(1000, 9);
  starts.col(4).setOnes();  // centre cell
  std::vector<int> sim_counts(9, 0), real_counts(9, 0);
  const int rounds = 100;
  for (int r = 0; r < rounds; ++r) {
    TransitionBatch out;
    out.Reserve(1000, 9);
    PerfectRollout(sim, starts, 1, {&q, 1.0}, rng, &out);
    for (int i = 0; i < out.size(); ++i) {
      int cell = 0;
      while (out.next_obs(i, cell) == 0.0f) ++cell;
      ++sim_counts[cell];
      real.Reset();
      real.SetAgent(4);
      env::StepResult s = real.Step(out.action[i]);
      int real_cell = 0;
      while (s.obs[real_cell] == 0) ++real_cell;
      ++real_counts[real_cell];
    }
  }
  // Two-sample chi-square over reachable outcomes (4 moves + goal).
  double chi = 0;
  int dof = -1;
  for (int c = 0; c < 9; ++c) {
    const double a = sim_counts[c], b = real_counts[c];
    if (a + b == 0) continue;
    chi += (a - b) * (a - b) / (a + b);
    ++dof;
  }
  EXPECT_EQ(dof, 4);
  EXPECT_LT(chi, 18.47);
}

// Online training -----------------------------------------------------------

OnlineConfig SmallOnline(const std::string& env_name, int size, AgentKind kind, int k = 10) {
  OnlineConfig c;
  c.env = {.name = env_name, .size = size};
  c.agent.kind = kind;
  c.agent.rollout_length = k;
  c.agent.q.hidden = {16};
  c.agent.model_hidden = {16};
  c.agent.q.step_size = 1e-3;
  c.steps = 40;
  c.updates_per_step = 2;
  c.warmup = 50;
  c.eval_interval = 20;
  c.eval.episodes = 2;
  c.eval.steps = 50;
  c.seed = 3;
  return c;
}

TEST(TrainOnlineTest, BudgetIsExactInContinuingEnvironments) {
  for (auto [kind, k] : std::vector<std::pair<AgentKind, int>>{{AgentKind::kExperienceReplay, 10},
                                                               {AgentKind::kSimpleModel, 10},
                                                               {AgentKind::kSimpleModel, 1},
                                                               {AgentKind::kPerfectModel, 10}}) {
    RunResult r = TrainOnline(SmallOnline("panflute", 3, kind, k));
    ASSERT_FALSE(r.failed) << r.error;
    EXPECT_EQ(r.budget.updates, 80);
    EXPECT_EQ(r.budget.min_per_update, 320);
    EXPECT_EQ(r.budget.max_per_update, 320);
    EXPECT_EQ(r.budget.real, kind == AgentKind::kExperienceReplay ? 80 * 320 : 0);
  }
}

TEST(TrainOnlineTest, BudgetIsBoundedInEpisodicEnvironments) {
  for (AgentKind kind : {AgentKind::kExperienceReplay, AgentKind::kSimpleModel,
                         AgentKind::kPerfectModel}) {
    RunResult r = TrainOnline(SmallOnline("opengrid", 3, kind));
    ASSERT_FALSE(r.failed) << r.error;
    EXPECT_LE(r.budget.max_per_update, 320);
    EXPECT_GE(r.budget.min_per_update, 1);
    if (kind == AgentKind::kPerfectModel) {
      EXPECT_LT(r.budget.min_per_update, 320);
    }
  }
}

TEST(TrainOnlineTest, WarmupScheduleAndEvalSpacing) {
  OnlineConfig c = SmallOnline("panflute", 3, AgentKind::kExperienceReplay);
  RunResult r = TrainOnline(c);
  EXPECT_EQ(r.env_steps, c.warmup + c.steps);
  EXPECT_EQ(r.updates, c.steps * c.updates_per_step);
  ASSERT_EQ(r.curve.size(), 4u);
  for (std::size_t i = 0; i < r.curve.size(); ++i) {
    EXPECT_EQ(r.curve[i].update_index, static_cast<std::int64_t>(20 * (i + 1)));
    EXPECT_EQ(r.curve[i].env_steps, c.warmup + 10 * static_cast<std::int64_t>(i + 1));
  }
}

TEST(TrainOnlineTest, DeterministicGivenSeed) {
  OnlineConfig c = SmallOnline("buttongrid", 2, AgentKind::kSimpleModel);
  RunResult a = TrainOnline(c), b = TrainOnline(c);
  ASSERT_EQ(a.curve.size(), b.curve.size());
  for (std::size_t i = 0; i < a.curve.size(); ++i) {
    EXPECT_EQ(a.curve[i].eval_score, b.curve[i].eval_score);
    EXPECT_EQ(a.curve[i].td_loss, b.curve[i].td_loss);
    EXPECT_EQ(a.curve[i].model_obs_loss, b.curve[i].model_obs_loss);
  }
  c.seed = 4;
  RunResult other = TrainOnline(c);
  EXPECT_NE(a.curve.back().td_loss, other.curve.back().td_loss);
}

TEST(TrainOnlineTest, RegimesHaveEqualUpdates) {
  OnlineConfig high, low;
  ApplyRegime(high, "high");
  ApplyRegime(low, "low");
  EXPECT_EQ(high.steps * high.updates_per_step, 1000000);
  EXPECT_EQ(low.steps * low.updates_per_step, 1000000);
  EXPECT_EQ(high.steps * high.updates_per_step / high.eval_interval, 200);
  EXPECT_THROW(ApplyRegime(low, "medium"), std::invalid_argument);
}

TEST(TrainOnlineTest, FinalScoreAveragesLastTen) {
  std::vector<MetricsRow> curve(15);
  for (int i = 0; i < 15; ++i) curve[i].eval_score = i;
  EXPECT_DOUBLE_EQ(FinalScore(curve), 9.5);
}

// Offline training ----------------------------------------------------------

TEST(TrainOfflineTest, RejectsEmptyDataset) {
  EXPECT_THROW(TrainOffline({}, {}), std::invalid_argument);
}

TEST(TrainOfflineTest, RolloutsStartFromDatasetStates) {
  std::vector<Transition> data =
      env::BuildCoverageDataset(env::CoverageLevel::kPathToGoal, {env::LowerEvaluationLayout()});
  std::set<std::string> states;
  for (const Transition& t : data) states.insert(t.obs.ToString());
  Rng rng(16);
  AgentConfig cfg;
  cfg.kind = AgentKind::kSimpleModel;
  cfg.q.hidden = {16};
  cfg.model_hidden = {16};
  for (int k : {1, 10}) {
    cfg.rollout_length = k;
    Agent agent(36, 5, cfg, rng);
    ReplayBuffer buffer = BufferOf(data);
    for (int u = 0; u < 5; ++u) {
      agent.Update(buffer, rng);
      const TransitionBatch& im = agent.last_imagined();
      ASSERT_GE(im.size(), cfg.rollouts());
      for (int i = 0; i < cfg.rollouts(); ++i) {
        EXPECT_TRUE(states.count(im.Row(i).obs.ToString()));
      }
    }
  }
  OfflineConfig oc{.agent = cfg, .updates = 3, .seed = 1, .num_actions = 5};
  OfflineResult r = TrainOffline(data, oc);
  EXPECT_EQ(r.budget.updates, 3);
  EXPECT_TRUE(r.model.has_value());
}

}  // namespace
}  // namespace agent
}  // namespace mbgen
