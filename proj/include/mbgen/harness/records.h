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

// Per-run results and their on-disk forms.

#ifndef MBGEN_HARNESS_RECORDS_H_
#define MBGEN_HARNESS_RECORDS_H_

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mbgen/agent/training.h"

namespace mbgen {
namespace harness {

struct RunRecord {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::vector<agent::MetricsRow> curve;
  double final_score = 0.0;
  bool failed = false;
  std::string error;
  agent::BudgetCounters budget;
};

RunRecord MakeRecord(const std::string& config_hash, std::uint64_t seed,
                     const agent::RunResult& result);

// update_index,env_steps,eval_score,td_loss,model_obs_loss,model_reward_loss,
// model_term_loss; doubles in shortest round-trip form.
void WriteCurveCsv(const std::vector<agent::MetricsRow>& curve, std::ostream& out);
// Throws std::invalid_argument on a bad header or row.
std::vector<agent::MetricsRow> ReadCurveCsv(std::istream& in);

// Everything except the curve.
nlohmann::json RecordSummaryJson(const RunRecord& record);
// Inverse of RecordSummaryJson plus a separately read curve.
RunRecord RecordFromJson(const nlohmann::json& j, std::vector<agent::MetricsRow> curve);

}  // namespace harness
}  // namespace mbgen

#endif  // MBGEN_HARNESS_RECORDS_H_
