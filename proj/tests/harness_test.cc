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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "gtest/gtest.h"
#include "mbgen/harness/config.h"
#include "mbgen/harness/grid.h"
#include "mbgen/harness/offline.h"
#include "mbgen/harness/records.h"
#include "mbgen/harness/run.h"

namespace mbgen {
namespace harness {
namespace {

namespace fs = std::filesystem;

fs::path TempDir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("mbgen_harness_" + name);
  fs::remove_all(p);
  return p;
}

ExperimentConfig Tiny() {
  ExperimentConfig c;
  c.env = {.name = "panflute", .size = 3};
  c.agent = agent::AgentKind::kSimpleModel;
  c.regime = "low";
  c.scale = 2000;  // 50 steps x 10 updates
  c.hidden = {8};
  c.model_hidden = {8};
  c.warmup = 20;
  c.eval_interval = 100;
  c.eval_steps = 50;
  c.seeds = 3;
  return c;
}

TEST(ConfigTest, ParsesCommentsAndWhitespace) {
  std::istringstream in("# header\n env = opengrid \n\nsize=12  # trailing\nhidden = 64, 64\n");
  ConfigMap m = ParseConfig(in);
  EXPECT_EQ(m.size(), 3u);
  ExperimentConfig c;
  ApplyConfig(m, &c);
  EXPECT_EQ(c.env.name, "opengrid");
  EXPECT_EQ(c.env.size, 12);
  EXPECT_EQ(c.hidden, (std::vector<int>{64, 64}));
}

TEST(ConfigTest, RejectsMalformedInput) {
  std::istringstream no_eq("env opengrid\n");
  EXPECT_THROW(ParseConfig(no_eq), std::invalid_argument);
  std::istringstream repeated("size = 1\nsize = 2\n");
  EXPECT_THROW(ParseConfig(repeated), std::invalid_argument);
  ExperimentConfig c;
  EXPECT_THROW(ApplyConfig({{"colour", "red"}}, &c), std::invalid_argument);
  EXPECT_THROW(ApplyConfig({{"size", "seven"}}, &c), std::invalid_argument);
  EXPECT_THROW(ApplyConfig({{"temperature", "0.1x"}}, &c), std::invalid_argument);
  EXPECT_THROW(ApplyConfig({{"agent", "oracle"}}, &c), std::invalid_argument);
}

TEST(ConfigTest, CanonicalFormRoundTrips) {
  ExperimentConfig c = Tiny();
  c.q_step_size = 1.0 / 3.0;
  c.temperature = 0.0125;
  std::istringstream in(CanonicalString(c));
  ExperimentConfig back;
  ApplyConfig(ParseConfig(in), &back);
  EXPECT_EQ(CanonicalString(back), CanonicalString(c));
  EXPECT_EQ(back.q_step_size, c.q_step_size);
  EXPECT_EQ(ConfigHash(back), ConfigHash(c));
}

TEST(ConfigTest, HashIgnoresExecutionSettingsOnly) {
  ExperimentConfig a = Tiny(), b = Tiny();
  b.seeds = 30;
  b.jobs = 4;
  b.output = "/elsewhere";
  b.first_seed = 7;
  EXPECT_EQ(ConfigHash(a), ConfigHash(b));
  b.temperature = 0.2;
  EXPECT_NE(ConfigHash(a), ConfigHash(b));
  EXPECT_EQ(ConfigHash(a).size(), 16u);
}

TEST(ConfigTest, HashIsFrozen) {
  // Machine-independent: the canonical text and FNV-1a are fully specified.
  ExperimentConfig c;
  EXPECT_EQ(ConfigHash(c), ConfigHash(ExperimentConfig{}));
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : CanonicalString(c)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  EXPECT_EQ(ConfigHash(c), buf);
  EXPECT_NE(CanonicalString(c).find("q_step_size = 1e-04\n"), std::string::npos);
}

TEST(ConfigTest, RegimesMapToOnlineSchedules) {
  ExperimentConfig c;
  c.regime = "high";
  agent::OnlineConfig high = ToOnlineConfig(c, 0);
  EXPECT_EQ(high.steps, 1000000);
  EXPECT_EQ(high.updates_per_step, 1);
  // 200 eval points at the default interval.
  EXPECT_EQ(high.steps * high.updates_per_step / high.eval_interval, 200);
  c.regime = "low";
  agent::OnlineConfig low = ToOnlineConfig(c, 0);
  EXPECT_EQ(low.steps, 100000);
  EXPECT_EQ(low.updates_per_step, 10);
  EXPECT_EQ(ExperimentConfig{}.seeds, 30);
}

TEST(RecordsTest, CurveCsvRoundTripsLosslessly) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  std::vector<agent::MetricsRow> curve;
  for (int i = 0; i < 50; ++i) {
    curve.push_back({(i + 1) * 5000LL, i * 500LL + 1000, u(rng) / 3, u(rng) * 1e-9, u(rng),
                     1.0 / (i + 3), std::nextafter(1.0, 2.0)});
  }
  std::stringstream ss;
  WriteCurveCsv(curve, ss);
  std::vector<agent::MetricsRow> back = ReadCurveCsv(ss);
  ASSERT_EQ(back.size(), curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    EXPECT_EQ(back[i].update_index, curve[i].update_index);
    EXPECT_EQ(back[i].env_steps, curve[i].env_steps);
    EXPECT_EQ(back[i].eval_score, curve[i].eval_score);
    EXPECT_EQ(back[i].td_loss, curve[i].td_loss);
    EXPECT_EQ(back[i].model_obs_loss, curve[i].model_obs_loss);
    EXPECT_EQ(back[i].model_reward_loss, curve[i].model_reward_loss);
    EXPECT_EQ(back[i].model_term_loss, curve[i].model_term_loss);
  }
}

TEST(RecordsTest, RejectsBadCsv) {
  std::istringstream bad_header("a,b\n");
  EXPECT_THROW(ReadCurveCsv(bad_header), std::invalid_argument);
  std::stringstream ss;
  WriteCurveCsv({}, ss);
  ss << "1,2,3\n";
  EXPECT_THROW(ReadCurveCsv(ss), std::invalid_argument);
}

TEST(RunExperimentTest, WritesCurvesAndSummary) {
  ExperimentConfig c = Tiny();
  c.output = TempDir("run").string();
  std::vector<RunRecord> records = RunExperiment(c);
  ASSERT_EQ(records.size(), 3u);
  for (const RunRecord& r : records) {
    EXPECT_FALSE(r.failed);
    ASSERT_EQ(r.curve.size(), 5u);
    for (std::size_t i = 0; i < r.curve.size(); ++i) {
      EXPECT_EQ(r.curve[i].update_index, 100 * static_cast<std::int64_t>(i + 1));
    }
    EXPECT_EQ(r.final_score, agent::FinalScore(r.curve));
    EXPECT_TRUE(fs::exists(fs::path(c.output) / ("seed_" + std::to_string(r.seed) + ".csv")));
  }
  nlohmann::json s = nlohmann::json::parse(ReadTextFile(c.output + "/summary.json"));
  EXPECT_EQ(s["config_hash"], ConfigHash(c));
  EXPECT_EQ(s["seeds"], 3);
  EXPECT_NEAR(s["final_score"]["mean"].get<double>(), FinalScoreStats(records).mean, 1e-12);
  fs::remove_all(c.output);
}

TEST(RunExperimentTest, ResumeReusesMatchingRuns) {
  ExperimentConfig c = Tiny();
  c.seeds = 2;
  c.output = TempDir("resume").string();
  std::vector<RunRecord> first = RunExperiment(c);
  // Corrupting the training config would change results; a resumed run must
  // return the stored ones without retraining.
  const auto stamp = fs::last_write_time(c.output + "/seed_0.csv");
  std::vector<RunRecord> second = RunExperiment(c);
  EXPECT_EQ(fs::last_write_time(c.output + "/seed_0.csv"), stamp);
  for (int i = 0; i < 2; ++i) {
    EXPECT_EQ(second[i].final_score, first[i].final_score);
    EXPECT_EQ(second[i].budget.imagined, first[i].budget.imagined);
  }
  c.temperature = 0.3;
  std::vector<RunRecord> third = RunExperiment(c);
  EXPECT_NE(third[0].config_hash, first[0].config_hash);
  fs::remove_all(c.output);
}

TEST(RunExperimentTest, DeterministicAcrossJobCounts) {
  ExperimentConfig c = Tiny();
  c.seeds = 3;
  std::vector<RunRecord> serial = RunExperiment(c);
  c.jobs = 3;
  std::vector<RunRecord> parallel = RunExperiment(c);
  for (int i = 0; i < 3; ++i) {
    ASSERT_EQ(serial[i].curve.size(), parallel[i].curve.size());
    for (std::size_t j = 0; j < serial[i].curve.size(); ++j) {
      EXPECT_EQ(serial[i].curve[j].eval_score, parallel[i].curve[j].eval_score);
      EXPECT_EQ(serial[i].curve[j].td_loss, parallel[i].curve[j].td_loss);
    }
  }
}

TEST(ParallelForTest, PropagatesExceptions) {
  EXPECT_THROW(ParallelFor(8, 3,
                           [](int i) {
                             if (i == 5) throw std::runtime_error("boom");
                           }),
               std::runtime_error);
  std::vector<int> hit(20, 0);
  ParallelFor(20, 4, [&](int i) { hit[i] = 1; });
  EXPECT_EQ(std::count(hit.begin(), hit.end(), 1), 20);
}

GridCell Scored(double mean) {
  GridCell c;
  c.score.mean = mean;
  c.score.n = 1;
  return c;
}

TEST(GridSearchTest, FullTableAndSlices) {
  GridSpec spec;
  int calls = 0;
  // Peak at step 2e-4, temperature 0.1 (interior, so no extension).
  GridResult r = GridSearch(spec, [&](double s, double t) {
    ++calls;
    return Scored(-std::abs(std::log2(s / 2e-4)) - std::abs(std::log2(t / 0.1)));
  });
  EXPECT_EQ(calls, 81);
  EXPECT_EQ(r.table.size(), 81u);
  EXPECT_EQ(r.extensions, 0);
  EXPECT_EQ(r.best.step_size, 2e-4);
  EXPECT_EQ(r.best.temperature, 0.1);
  EXPECT_EQ(r.step_slice.size(), 9u);
  EXPECT_EQ(r.temperature_slice.size(), 9u);
  double max = -1e300;
  for (const GridCell& c : r.table) max = std::max(max, c.score.mean);
  EXPECT_EQ(r.best.score.mean, max);
  for (const GridCell& c : r.step_slice) EXPECT_EQ(c.temperature, 0.1);
  for (const GridCell& c : r.temperature_slice) EXPECT_EQ(c.step_size, 2e-4);
}

TEST(GridSearchTest, TiesPreferSmallerStepThenTemperature) {
  GridResult r = GridSearch(GridSpec{}, [](double s, double t) {
    return Scored(s >= 1e-4 && s <= 4e-4 && t >= 0.05 && t <= 0.4 ? 1.0 : 0.0);
  });
  EXPECT_EQ(r.best.step_size, 1e-4);
  EXPECT_EQ(r.best.temperature, 0.05);
}

TEST(GridSearchTest, BoundaryOptimumExtendsAtMostTwice) {
  GridSpec spec;
  GridResult r = GridSearch(spec, [](double s, double t) {
    // Keeps improving with larger step sizes; temperature peak interior.
    return Scored(std::log(s) - std::abs(std::log2(t / 0.2)));
  });
  EXPECT_EQ(r.extensions, 2);
  EXPECT_EQ(r.step_sizes.size(), 11u);
  EXPECT_DOUBLE_EQ(r.step_sizes.back(), 1.28e-2);
  EXPECT_EQ(r.best.step_size, r.step_sizes.back());
  EXPECT_EQ(r.table.size(), 99u);
  EXPECT_EQ(r.step_slice.size(), 11u);
}

TEST(GridSearchTest, LowerBoundaryExtendsDownward) {
  GridResult r = GridSearch(GridSpec{}, [](double s, double t) {
    return Scored(-std::abs(std::log2(s / 1e-4)) - std::log(t));
  });
  EXPECT_EQ(r.temperatures.front(), 0.0125 / 4);
  EXPECT_EQ(r.best.temperature, 0.0125 / 4);
}

TEST(GridSearchTest, ValidatesGrid) {
  GridSpec bad;
  bad.step_sizes = {1e-4, 1e-5};
  EXPECT_THROW(bad.Validate(), std::invalid_argument);
  bad.step_sizes = {0.0, 1e-5};
  EXPECT_THROW(bad.Validate(), std::invalid_argument);
  bad.step_sizes = {};
  EXPECT_THROW(bad.Validate(), std::invalid_argument);
  EXPECT_NO_THROW(GridSpec{}.Validate());
}

TEST(GridSearchTest, TuningInstances) {
  EXPECT_EQ(TuningEnvironment("procmaze").size, 4);
  EXPECT_EQ(TuningEnvironment("buttongrid").size, 4);
  EXPECT_EQ(TuningEnvironment("panflute").size, 7);
  EXPECT_EQ(TuningEnvironment("opengrid").size, 12);
  EXPECT_THROW(TuningEnvironment("maze3"), std::invalid_argument);
}

TEST(GridSearchTest, ExperimentEvaluatorRunsRealCells) {
  ExperimentConfig base = Tiny();
  base.seeds = 2;
  base.scale = 10000;  // 10 steps
  base.eval_interval = 50;
  GridSpec spec;
  spec.step_sizes = {1e-4, 2e-4};
  spec.temperatures = {0.1, 0.2};
  spec.max_extensions = 0;
  GridResult r = GridSearch(spec, ExperimentEvaluator(base));
  EXPECT_EQ(r.table.size(), 4u);
  for (const GridCell& c : r.table) EXPECT_EQ(c.score.n, 2);
}

TEST(OfflineSuiteTest, TwelveCellsWithFixedHyperparameters) {
  OfflineSuiteConfig c;
  EXPECT_EQ(c.levels.size() * c.variants.size(), 12u);
  EXPECT_EQ(c.step_size, 2e-4);
  EXPECT_EQ(c.temperature, 0.1);
  EXPECT_EQ(c.seeds, 30);
  EXPECT_EQ(c.updates, 1000000);
  EXPECT_EQ(ParseOfflineVariant("10-step").rollout_length, 10);
  EXPECT_THROW(ParseOfflineVariant("2-step"), std::invalid_argument);
}

TEST(OfflineSuiteTest, SmallRunPersistsAndResumes) {
  OfflineSuiteConfig c;
  c.levels = {env::CoverageLevel::kPathToGoal};
  c.variants = {ParseOfflineVariant("model-free"), ParseOfflineVariant("10-step")};
  c.seeds = 2;
  c.updates = 3;
  c.hidden = {8};
  c.model_hidden = {8};
  c.output = TempDir("offline").string();
  std::vector<OfflineCellResult> first = RunOfflineSuite(c);
  ASSERT_EQ(first.size(), 2u);
  EXPECT_EQ(first[0].grid.seeds, 2);
  EXPECT_TRUE(std::isnan(first[0].position_accuracy));
  EXPECT_GE(first[1].position_accuracy, 0.0);
  EXPECT_TRUE(fs::exists(c.output + "/path-to-goal/10-step/q_seed_1.bin"));
  EXPECT_TRUE(fs::exists(c.output + "/path-to-goal/10-step/cells.csv"));
  std::vector<OfflineCellResult> second = RunOfflineSuite(c);
  for (int i = 0; i < 2; ++i) {
    for (int s = 0; s < 2; ++s) EXPECT_EQ(second[i].qnets[s], first[i].qnets[s]);
    if (!std::isnan(first[i].position_accuracy)) {
      EXPECT_EQ(second[i].position_accuracy, first[i].position_accuracy);
    }
  }
  nlohmann::json j = nlohmann::json::parse(ReadTextFile(c.output + "/summary.json"));
  EXPECT_EQ(j["cells"].size(), 2u);
  fs::remove_all(c.output);
}

}  // namespace
}  // namespace harness
}  // namespace mbgen
