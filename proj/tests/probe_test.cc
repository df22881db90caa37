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
#include <filesystem>
#include <random>
#include <sstream>

#include "gtest/gtest.h"
#include "mbgen/env/panflute.h"
#include "mbgen/nn/checkpoint.h"
#include "mbgen/probe/aggregate.h"
#include "mbgen/probe/frozen.h"
#include "mbgen/probe/maze.h"
#include "mbgen/probe/smoothing.h"

namespace mbgen {
namespace probe {
namespace {

namespace fs = std::filesystem;
using env::MazeLayout;

// Smoothing -----------------------------------------------------------------

TEST(SmoothingProbeTest, GroundTruthGivesIndicatorProfile) {
  for (int n : {3, 5, 9}) {
    SmoothingConfig c;
    c.steps = 20000;
    c.seed = n;
    SmoothingProfile p = SmoothingProbe(GroundTruthPredictor(n), n, c);
    ASSERT_EQ(p.reward_mean.size(), static_cast<std::size_t>(n + 1));
    for (int b = 0; b <= n; ++b) {
      if (!p.reward_count[b]) continue;
      EXPECT_EQ(p.reward_mean[b], b == n ? 1.0 : 0.0) << "n=" << n << " bin " << b;
    }
    EXPECT_GT(p.reward_count[n], 0);
  }
}

TEST(SmoothingProbeTest, GroundTruthAllEndsNextOnDeterministicFlute) {
  SmoothingConfig c;
  c.steps = 20000;
  c.disable_spontaneous = true;
  SmoothingProfile p = SmoothingProbe(GroundTruthPredictor(5), 5, c);
  for (int b = 0; b <= 5; ++b) {
    if (p.next_count[b]) {
      EXPECT_EQ(p.all_next_mean[b], b == 5 ? 1.0 : 0.0);
    }
  }
}

TEST(SmoothingProbeTest, UntrainedModelIsNearlyFlat) {
  agent::Rng rng(3);
  agent::SimpleDynamicsModel model(env::PanFlute(9, 0).observation_size(), 9, rng);
  SmoothingConfig c;
  c.steps = 20000;
  SmoothingProfile p = SmoothingProbe(ModelPredictor(model), 9, c);
  // Near-zero logits put every end bit near 1/2, so the all-ends product is
  // near 2^-9 in every bin.
  for (int b = 0; b <= 9; ++b) {
    if (p.next_count[b]) {
      EXPECT_NEAR(p.all_next_mean[b], std::pow(0.5, 9), 0.01);
    }
  }
  double lo = 1e9, hi = -1e9;
  for (int b = 0; b <= 9; ++b) {
    if (!p.reward_count[b]) continue;
    lo = std::min(lo, p.reward_mean[b]);
    hi = std::max(hi, p.reward_mean[b]);
  }
  EXPECT_LT(hi - lo, 0.5);
}

TEST(SmoothingProbeTest, EmptyBinsAreAbsentNotZero) {
  SmoothingConfig c;
  c.steps = 3;
  c.disable_spontaneous = true;
  SmoothingProfile p = SmoothingProbe(GroundTruthPredictor(7), 7, c);
  EXPECT_EQ(p.reward_count[7], 0);
  EXPECT_TRUE(std::isnan(p.reward_mean[7]));
  std::ostringstream out;
  WriteSmoothingCsv(p, out);
  EXPECT_NE(out.str().find("\n7,0,,"), std::string::npos);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')),
            "bin,reward_count,mean_predicted_reward,next_count,mean_all_ends_next");
}

TEST(SmoothingProbeTest, PureSuccessorPolicyIsPipelined) {
  SmoothingConfig c;
  c.steps = 9000;
  c.successor_probability = 1.0;
  c.disable_spontaneous = true;
  SmoothingProfile p = SmoothingProbe(GroundTruthPredictor(9), 9, c);
  // The rewarding state recurs once per cycle.
  EXPECT_NEAR(static_cast<double>(p.reward_count[9]) / c.steps, 1.0 / 9, 0.002);
}

TEST(SmoothingProbeTest, MonotonicityReport) {
  SmoothingProfile p;
  p.pipes = 4;
  p.reward_count = {1, 1, 0, 1, 1};
  p.reward_mean = {0.1, 0.2, std::nan(""), 0.19, 0.5};
  MonotonicityReport r = RewardMonotonicity(p, 0.0);
  EXPECT_EQ(r.inversions, 1);
  EXPECT_NEAR(r.largest_drop, 0.01, 1e-12);
  EXPECT_EQ(RewardMonotonicity(p, 0.02).inversions, 0);
}

// Frozen-model study --------------------------------------------------------

TEST(FrozenStudyTest, GeometricSchedule) {
  EXPECT_EQ(GeometricCheckpointSchedule(100000),
            (std::vector<std::int64_t>{1000, 2000, 5000, 10000, 20000, 50000, 100000}));
  EXPECT_EQ(GeometricCheckpointSchedule(1500), (std::vector<std::int64_t>{1000}));
  EXPECT_TRUE(GeometricCheckpointSchedule(999).empty());
}

TEST(FrozenStudyTest, MaximumRewardRateForNinePipes) {
  env::PanFlute flute(9, 0, {.disable_spontaneous = true});
  flute.Reset();
  for (int t = 0; t < 9; ++t) flute.Step(t);
  double total = 0;
  for (int t = 0; t < 9000; ++t) total += flute.Step(t % 9).reward;
  EXPECT_EQ(total / 9000, 1.0 / 9);
  EXPECT_EQ(DefaultFrozenStudyConfig().base.env.size, 9);
  EXPECT_EQ(DefaultFrozenStudyConfig().base.steps * DefaultFrozenStudyConfig().base.updates_per_step,
            1000000);
}

FrozenStudyConfig TinyStudy() {
  FrozenStudyConfig c;
  c.base.env = {.name = "panflute", .size = 3};
  c.base.agent.q.hidden = {8};
  c.base.agent.model_hidden = {8};
  c.base.steps = 40;
  c.base.updates_per_step = 2;
  c.base.warmup = 10;
  c.base.eval_interval = 20;
  c.base.eval.steps = 30;
  c.seeds = 4;
  c.reward_bin = 2;
  c.probe_steps = 2000;
  return c;
}

TEST(FrozenStudyTest, CensoringAccountsForEverySeed) {
  agent::Rng rng(4);
  agent::SimpleDynamicsModel model(6, 3, rng, 2e-4, {8});
  std::vector<FrozenCheckpoint> ckpts = {{0, model.params()}, {10, model.params()}};
  FrozenStudyConfig c = TinyStudy();
  c.threshold = 10.0;  // unreachable
  std::vector<FrozenModelResult> r = FrozenModelStudy(ckpts, c);
  ASSERT_EQ(r.size(), 2u);
  for (const FrozenModelResult& x : r) {
    EXPECT_EQ(x.successes, 0);
    EXPECT_EQ(x.failures, 4);
    EXPECT_EQ(x.successes + x.failures, static_cast<int>(x.seeds.size()));
    for (const auto& s : x.seeds) EXPECT_FALSE(s.reached_update.has_value());
  }
  c.threshold = 1e-9;
  for (const FrozenModelResult& x : FrozenModelStudy(ckpts, c)) {
    EXPECT_EQ(x.successes + x.failures, 4);
    for (const auto& s : x.seeds) {
      if (s.reached_update) {
        EXPECT_LE(*s.reached_update, 80);
        EXPECT_EQ(*s.reached_update % 20, 0);
      }
    }
  }
  std::ostringstream out;
  WriteFrozenCsv(r, out);
  EXPECT_NE(out.str().find("\n0,4,0,4,,,"), std::string::npos);
}

TEST(FrozenStudyTest, LoadsCheckpointsSortedByUpdate) {
  fs::path dir = fs::temp_directory_path() / "mbgen_probe_ckpts";
  fs::remove_all(dir);
  fs::create_directories(dir / "seed_0");
  agent::Rng rng(5);
  agent::SimpleDynamicsModel a(6, 3, rng, 2e-4, {4}), b(6, 3, rng, 2e-4, {4});
  nn::SaveCheckpoint((dir / "seed_0" / "update_5000").string(), b.params(), {{"update", 5000}});
  nn::SaveCheckpoint((dir / "seed_0" / "update_1000").string(), a.params(), {{"update", 1000}});
  std::vector<FrozenCheckpoint> loaded = LoadModelCheckpoints(dir.string());
  ASSERT_EQ(loaded.size(), 2u);
  EXPECT_EQ(loaded[0].update, 1000);
  EXPECT_EQ(loaded[0].params, a.params());
  EXPECT_EQ(loaded[1].params, b.params());
  fs::remove_all(dir);
  EXPECT_THROW(LoadModelCheckpoints(dir.string()), std::runtime_error);
}

// Maze cells ----------------------------------------------------------------

// Linear Q-network whose greedy action at each cell is `choice(cell)`.
nn::MlpParams<float> TableNet(const std::function<int(int)>& choice) {
  nn::Architecture arch{.input = 36, .hidden = {}, .heads = {5}};
  nn::MlpParams<float> p(arch);
  for (int c = 0; c < 9; ++c) p.W(0)(c, choice(c)) = 1.0f;
  return p;
}

nn::MlpParams<float> OptimalNet(const MazeLayout& layout) {
  auto opt = env::OptimalActions(layout);
  return TableNet([opt](int c) { return opt[c].empty() ? 0 : opt[c][0]; });
}

nn::MlpParams<float> NoopNet() {
  return TableNet([](int) { return env::kNoop; });
}

TEST(CellCorrectnessTest, OptimalNetworksPass) {
  MazeLayout lower = env::LowerEvaluationLayout();
  CorrectnessGrid g = CellCorrectness({OptimalNet(lower), OptimalNet(lower)}, lower);
  EXPECT_TRUE(g.pass);
  EXPECT_TRUE(g.failing.empty());
  for (int c = 0; c < 9; ++c) {
    if (!g.evaluated[c]) continue;
    double sum = 0;
    for (double f : g.frequency[c]) sum += f;
    EXPECT_NEAR(sum, 1.0, 1e-12);
    EXPECT_EQ(g.Correct(c), 1.0);
  }
  EXPECT_EQ(std::count(g.evaluated.begin(), g.evaluated.end(), true), 6);
}

TEST(CellCorrectnessTest, MajorityRule) {
  MazeLayout lower = env::LowerEvaluationLayout();
  auto good = OptimalNet(lower), bad = NoopNet();
  EXPECT_FALSE(CellCorrectness({bad}, lower).pass);
  EXPECT_EQ(CellCorrectness({bad}, lower).failing.size(), 6u);
  EXPECT_TRUE(CellCorrectness({good, good, bad}, lower).pass);
  // An even split is not a majority of wrong choices.
  EXPECT_TRUE(CellCorrectness({good, bad}, lower).pass);
  EXPECT_FALSE(CellCorrectness({good, bad, bad}, lower).pass);
  // One wrong cell is enough to fail.
  auto opt = env::OptimalActions(lower);
  auto one_off = TableNet([opt](int c) { return c == 7 ? env::kUp : (opt[c].empty() ? 0 : opt[c][0]); });
  CorrectnessGrid g = CellCorrectness({one_off}, lower);
  EXPECT_FALSE(g.pass);
  EXPECT_EQ(g.failing, (std::vector<int>{7}));
}

TEST(CellCorrectnessTest, DeterministicAndCsv) {
  MazeLayout upper = env::UpperEvaluationLayout();
  agent::Rng rng(6);
  std::vector<nn::MlpParams<float>> nets;
  for (int i = 0; i < 5; ++i) {
    nets.push_back(nn::InitMlp<float>({.input = 36, .hidden = {16}, .heads = {5}}, rng));
  }
  CorrectnessGrid a = CellCorrectness(nets, upper), b = CellCorrectness(nets, upper);
  EXPECT_EQ(a.frequency, b.frequency);
  EXPECT_EQ(a.pass, b.pass);
  std::ostringstream out;
  WriteCorrectnessCsv(a, out);
  const std::string csv = out.str();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 10);
}

TEST(CellCorrectnessTest, UnreachableCellsAreExcluded) {
  MazeLayout boxed = MazeLayout::FromWalls({{0, 1}, {1, 0}});
  CorrectnessGrid g = CellCorrectness({NoopNet()}, boxed);
  EXPECT_EQ(g.excluded, (std::vector<int>{2, 4, 5, 6, 7, 8}));
  EXPECT_TRUE(g.pass);
  EXPECT_THROW(CellCorrectness({}, boxed), std::invalid_argument);
}

TEST(PositionAccuracyTest, PerfectAndChanceLevels) {
  MazeLayout lower = env::LowerEvaluationLayout();
  std::vector<env::Transition> data = env::EnumerateLayoutTransitions(lower);
  env::IllustrativeMaze sim(lower, 1);
  EXPECT_EQ(ModelPositionAccuracy(sim, data), 1.0);
  agent::Rng rng(7);
  double sum = 0;
  const int models = 200;
  for (int i = 0; i < models; ++i) {
    agent::SimpleDynamicsModel m(36, 5, rng, 2e-4, {16});
    sum += ModelPositionAccuracy(m, data);
  }
  EXPECT_NEAR(sum / models, 1.0 / 9, 0.04);
}

TEST(PositionAccuracyTest, TrainedModelIsNearPerfect) {
  std::vector<env::Transition> train = env::BuildCoverageDataset(
      env::CoverageLevel::kPathToGoal,
      {env::LowerEvaluationLayout(), env::UpperEvaluationLayout()});
  agent::Rng rng(8);
  agent::SimpleDynamicsModel m(36, 5, rng, 1e-3, {64, 64});
  agent::ReplayBuffer buffer(train.size(), 36);
  for (const auto& t : train) buffer.Add(t);
  for (int i = 0; i < 3000; ++i) m.Update(buffer.Sample(32, rng));
  EXPECT_GE(ModelPositionAccuracy(m, env::EnumerateLayoutTransitions(env::LowerEvaluationLayout())),
            0.99);
}

// Aggregation ---------------------------------------------------------------

harness::RunRecord Record(const std::string& hash, std::vector<double> scores) {
  harness::RunRecord r;
  r.config_hash = hash;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    agent::MetricsRow m;
    m.update_index = 5000 * static_cast<std::int64_t>(i + 1);
    m.eval_score = scores[i];
    r.curve.push_back(m);
  }
  r.final_score = agent::FinalScore(r.curve);
  return r;
}

TEST(AggregateTest, SingleSeedIsFlaggedWithZeroWidth) {
  AggregatedCurve a = Aggregate({Record("h", {1, 2, 3})});
  EXPECT_TRUE(a.single_seed);
  for (const CurvePoint& p : a.points) EXPECT_EQ(p.score.half_width, 0.0);
  EXPECT_EQ(a.final_score.mean, 2.0);
}

TEST(AggregateTest, IdenticalCurvesHaveZeroWidth) {
  std::vector<harness::RunRecord> rs(30, Record("h", {0.5, 0.25, 0.75}));
  AggregatedCurve a = Aggregate(rs);
  EXPECT_FALSE(a.single_seed);
  for (const CurvePoint& p : a.points) EXPECT_EQ(p.score.half_width, 0.0);
  EXPECT_EQ(a.points[2].smoothed, 0.5);
}

TEST(AggregateTest, SmoothingUsesTrailingTen) {
  std::vector<double> s;
  for (int i = 0; i < 15; ++i) s.push_back(i);
  AggregatedCurve a = Aggregate({Record("h", s), Record("h", s)});
  EXPECT_EQ(a.points[3].smoothed, 1.5);
  EXPECT_EQ(a.points[14].smoothed, 9.5);
  EXPECT_EQ(a.final_score.mean, 9.5);
}

TEST(AggregateTest, RejectsMismatches) {
  EXPECT_THROW(Aggregate({}), std::invalid_argument);
  EXPECT_THROW(Aggregate({Record("a", {1}), Record("b", {1})}), std::invalid_argument);
  EXPECT_THROW(Aggregate({Record("a", {1}), Record("a", {1, 2})}), std::invalid_argument);
  harness::RunRecord failed = Record("a", {});
  failed.failed = true;
  AggregatedCurve a = Aggregate({Record("a", {1, 2}), failed});
  EXPECT_EQ(a.failed_runs, 1);
  EXPECT_TRUE(a.single_seed);
}

TEST(AggregateTest, IntervalsCoverTheMeanAtNominalRate) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal(3.0, 2.0);
  int covered = 0;
  const int reps = 4000;
  for (int r = 0; r < reps; ++r) {
    std::vector<double> x(30);
    for (double& v : x) v = normal(rng);
    MeanCi ci = ComputeMeanCi(x);
    covered += ci.lower() <= 3.0 && 3.0 <= ci.upper();
  }
  // z-interval with a sample sd at n = 30 covers about 94%.
  EXPECT_NEAR(static_cast<double>(covered) / reps, 0.945, 0.015);
}

}  // namespace
}  // namespace probe
}  // namespace mbgen
