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

#include "mbgen/probe/frozen.h"

#include <algorithm>
#include <filesystem>
#include <mutex>
#include <stdexcept>

#include "mbgen/harness/run.h"
#include "mbgen/nn/checkpoint.h"
#include "mbgen/probe/smoothing.h"

namespace mbgen {
namespace probe {
namespace fs = std::filesystem;

std::vector<std::int64_t> GeometricCheckpointSchedule(std::int64_t max_update) {
  std::vector<std::int64_t> out;
  for (std::int64_t decade = 1000; decade <= max_update; decade *= 10) {
    for (std::int64_t m : {1, 2, 5}) {
      if (decade * m <= max_update) out.push_back(decade * m);
    }
  }
  return out;
}

std::vector<FrozenCheckpoint> LoadModelCheckpoints(const std::string& dir) {
  if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir);
  std::vector<std::pair<std::string, std::int64_t>> found;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.path().extension() != ".json" || !entry.is_regular_file()) continue;
    nlohmann::json meta;
    try {
      meta = nlohmann::json::parse(harness::ReadTextFile(entry.path().string()));
    } catch (const nlohmann::json::exception&) {
      continue;
    }
    if (!meta.contains("metadata") || !meta["metadata"].contains("update")) continue;
    found.emplace_back(entry.path().string(), meta["metadata"]["update"].get<std::int64_t>());
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second < b.second : a.first < b.first;
  });
  std::vector<FrozenCheckpoint> out;
  for (const auto& [path, update] : found) out.push_back({update, nn::LoadCheckpoint(path).params});
  return out;
}

FrozenStudyConfig DefaultFrozenStudyConfig() {
  FrozenStudyConfig c;
  c.base.env = {.name = "panflute", .size = 9};
  c.base.agent.kind = agent::AgentKind::kSimpleModel;
  agent::ApplyRegime(c.base, "high");
  return c;
}

std::vector<FrozenModelResult> FrozenModelStudy(const std::vector<FrozenCheckpoint>& checkpoints,
                                                const FrozenStudyConfig& config) {
  if (config.base.env.name != "panflute") {
    throw std::invalid_argument("frozen-model study runs on panflute");
  }
  const int pipes = config.base.env.size;
  const double threshold = config.threshold > 0 ? config.threshold : 0.95 / pipes;
  std::vector<FrozenModelResult> out;
  for (const FrozenCheckpoint& ckpt : checkpoints) {
    FrozenModelResult r;
    r.checkpoint_update = ckpt.update;
    r.seeds.resize(config.seeds);
    harness::ParallelFor(config.seeds, config.jobs, [&](int i) {
      agent::OnlineConfig c = config.base;
      c.agent.kind = agent::AgentKind::kSimpleModel;
      c.agent.train_model = false;
      c.initial_model = ckpt.params;
      c.stop_at_score = threshold;
      c.seed = config.first_seed + i;
      agent::RunResult run = agent::TrainOnline(c);
      FrozenSeedOutcome& o = r.seeds[i];
      o.seed = c.seed;
      o.failed_run = run.failed;
      if (run.reached_at && !run.failed) {
        o.reached_update = run.reached_at;
        o.reached_env_steps = run.env_steps;
      }
    });
    std::vector<double> steps;
    for (const FrozenSeedOutcome& o : r.seeds) {
      if (o.reached_env_steps) {
        ++r.successes;
        steps.push_back(static_cast<double>(*o.reached_env_steps));
      } else {
        ++r.failures;
      }
    }
    r.env_steps_to_threshold = ComputeMeanCi(steps);
    agent::SimpleDynamicsModel model(ckpt.params, pipes);
    SmoothingConfig sc;
    sc.steps = config.probe_steps;
    sc.seed = config.first_seed;
    const SmoothingProfile profile = SmoothingProbe(ModelPredictor(model), pipes, sc);
    r.predicted_reward_at_bin = config.reward_bin <= pipes ? profile.reward_mean[config.reward_bin]
                                                           : std::nan("");
    out.push_back(std::move(r));
  }
  return out;
}

void WriteFrozenCsv(const std::vector<FrozenModelResult>& results, std::ostream& out) {
  out << "checkpoint_update,seeds,successes,failures,mean_env_steps,ci95_half_width,"
         "predicted_reward_at_bin\n";
  for (const FrozenModelResult& r : results) {
    out << r.checkpoint_update << ',' << r.seeds.size() << ',' << r.successes << ','
        << r.failures << ',';
    if (r.successes) out << r.env_steps_to_threshold.mean;
    out << ',';
    if (r.successes) out << r.env_steps_to_threshold.half_width;
    out << ',' << r.predicted_reward_at_bin << '\n';
  }
}

}  // namespace probe
}  // namespace mbgen
