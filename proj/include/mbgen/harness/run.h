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

// Multi-seed online experiments with per-run CSV curves and a summary.

#ifndef MBGEN_HARNESS_RUN_H_
#define MBGEN_HARNESS_RUN_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mbgen/harness/config.h"
#include "mbgen/harness/records.h"
#include "mbgen/stats.h"

namespace mbgen {
namespace harness {

// Runs fn(0..n-1) on up to `jobs` worker threads. The first exception thrown
// by any call is rethrown after all workers finish.
void ParallelFor(int n, int jobs, const std::function<void(int)>& fn);

struct RunOptions {
  // Reuse seed_<k>.json/.csv files in the output directory whose config hash
  // matches instead of rerunning.
  bool resume = true;
  // Update indices at which to save the learned model of each run under
  // <output>/models/seed_<k>/.
  std::vector<std::int64_t> model_checkpoints;
  std::function<void(const RunRecord&)> on_record;
};

// One record per seed in [first_seed, first_seed + seeds), in seed order.
// With config.output set, writes seed_<k>.csv, seed_<k>.json, config.txt and
// summary.json there.
std::vector<RunRecord> RunExperiment(const ExperimentConfig& config,
                                     const RunOptions& options = {});

// Final-score statistics over the non-failed records.
MeanCi FinalScoreStats(const std::vector<RunRecord>& records);

nlohmann::json ExperimentSummaryJson(const ExperimentConfig& config,
                                     const std::vector<RunRecord>& records);

void WriteTextFile(const std::string& path, const std::string& text);
std::string ReadTextFile(const std::string& path);

}  // namespace harness
}  // namespace mbgen

#endif  // MBGEN_HARNESS_RUN_H_
