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

// Offline maze suite: coverage levels x agent variants, many seeds each.

#ifndef MBGEN_HARNESS_OFFLINE_H_
#define MBGEN_HARNESS_OFFLINE_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mbgen/agent/agent.h"
#include "mbgen/env/illustrative_maze.h"
#include "mbgen/probe/maze.h"

namespace mbgen {
namespace harness {

struct OfflineVariant {
  std::string name;
  agent::AgentKind kind = agent::AgentKind::kExperienceReplay;
  int rollout_length = 1;
};

// "model-free", "1-step" (320 one-step rollouts) and "10-step" (32 rollouts
// of length 10).
std::vector<OfflineVariant> DefaultOfflineVariants();
OfflineVariant ParseOfflineVariant(const std::string& name);

struct OfflineSuiteConfig {
  std::vector<env::CoverageLevel> levels = {env::kAllCoverageLevels.begin(),
                                            env::kAllCoverageLevels.end()};
  std::vector<OfflineVariant> variants = DefaultOfflineVariants();
  int seeds = 30;
  std::uint64_t first_seed = 0;
  std::int64_t updates = 1000000;
  double step_size = 2e-4;
  double temperature = 0.1;
  std::vector<int> hidden = {200, 200, 200};
  std::vector<int> model_hidden = {200, 200, 200};
  std::vector<env::MazeLayout> eval_layouts = {env::LowerEvaluationLayout(),
                                               env::UpperEvaluationLayout()};
  // Layout whose cells decide the verdict.
  env::MazeLayout verdict_layout = env::LowerEvaluationLayout();
  int jobs = 1;
  // When set, networks are saved as <output>/<level>/<variant>/q_seed_<k>
  // (and model_seed_<k>) checkpoints and reused on rerun.
  std::string output;
};

struct OfflineCellResult {
  env::CoverageLevel level;
  OfflineVariant variant;
  std::vector<nn::MlpParams<float>> qnets;
  probe::CorrectnessGrid grid;
  // Mean over seeds on the verdict layout's transitions; NaN without a model.
  double position_accuracy = 0.0;
};

// Hash of everything that determines one cell's networks.
std::string OfflineCellHash(const OfflineSuiteConfig& config, env::CoverageLevel level,
                            const OfflineVariant& variant);

std::vector<OfflineCellResult> RunOfflineSuite(
    const OfflineSuiteConfig& config,
    const std::function<void(const OfflineCellResult&)>& on_cell = nullptr);

nlohmann::json OfflineSuiteJson(const OfflineSuiteConfig& config,
                                const std::vector<OfflineCellResult>& cells);

}  // namespace harness
}  // namespace mbgen

#endif  // MBGEN_HARNESS_OFFLINE_H_
