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

#include "mbgen/harness/records.h"

#include <sstream>
#include <stdexcept>

#include "mbgen/harness/config.h"

namespace mbgen {
namespace harness {
namespace {

constexpr char kCurveHeader[] =
    "update_index,env_steps,eval_score,td_loss,model_obs_loss,model_reward_loss,"
    "model_term_loss";

}  // namespace

RunRecord MakeRecord(const std::string& config_hash, std::uint64_t seed,
                     const agent::RunResult& result) {
  RunRecord r;
  r.config_hash = config_hash;
  r.seed = seed;
  r.curve = result.curve;
  r.final_score = agent::FinalScore(result.curve);
  r.failed = result.failed;
  r.error = result.error;
  r.budget = result.budget;
  return r;
}

void WriteCurveCsv(const std::vector<agent::MetricsRow>& curve, std::ostream& out) {
  out << kCurveHeader << '\n';
  for (const agent::MetricsRow& m : curve) {
    out << m.update_index << ',' << m.env_steps << ',' << FormatDouble(m.eval_score) << ','
        << FormatDouble(m.td_loss) << ',' << FormatDouble(m.model_obs_loss) << ','
        << FormatDouble(m.model_reward_loss) << ',' << FormatDouble(m.model_term_loss) << '\n';
  }
}

std::vector<agent::MetricsRow> ReadCurveCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCurveHeader) {
    throw std::invalid_argument("curve csv: unexpected header");
  }
  std::vector<agent::MetricsRow> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    if (f.size() != 7) throw std::invalid_argument("curve csv: bad row '" + line + "'");
    agent::MetricsRow m;
    try {
      m.update_index = std::stoll(f[0]);
      m.env_steps = std::stoll(f[1]);
    } catch (const std::exception&) {
      throw std::invalid_argument("curve csv: bad row '" + line + "'");
    }
    m.eval_score = ParseDouble(f[2]);
    m.td_loss = ParseDouble(f[3]);
    m.model_obs_loss = ParseDouble(f[4]);
    m.model_reward_loss = ParseDouble(f[5]);
    m.model_term_loss = ParseDouble(f[6]);
    out.push_back(m);
  }
  return out;
}

nlohmann::json RecordSummaryJson(const RunRecord& r) {
  nlohmann::json j = {{"config_hash", r.config_hash},
                      {"seed", r.seed},
                      {"failed", r.failed},
                      {"eval_points", r.curve.size()},
                      {"budget",
                       {{"updates", r.budget.updates},
                        {"real", r.budget.real},
                        {"imagined", r.budget.imagined},
                        {"min_per_update", r.budget.updates ? r.budget.min_per_update : 0},
                        {"max_per_update", r.budget.max_per_update}}}};
  // JSON has no NaN; a failed or empty run stores null.
  if (std::isfinite(r.final_score)) {
    j["final_score"] = r.final_score;
  } else {
    j["final_score"] = nullptr;
  }
  if (r.failed) j["error"] = r.error;
  return j;
}

RunRecord RecordFromJson(const nlohmann::json& j, std::vector<agent::MetricsRow> curve) {
  RunRecord r;
  r.config_hash = j.at("config_hash").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.failed = j.at("failed").get<bool>();
  r.final_score = j.at("final_score").is_null() ? std::nan("")
                                                : j.at("final_score").get<double>();
  if (j.contains("error")) r.error = j.at("error").get<std::string>();
  const auto& b = j.at("budget");
  r.budget.updates = b.at("updates").get<std::int64_t>();
  r.budget.real = b.at("real").get<std::int64_t>();
  r.budget.imagined = b.at("imagined").get<std::int64_t>();
  r.budget.min_per_update = b.at("min_per_update").get<std::int64_t>();
  r.budget.max_per_update = b.at("max_per_update").get<std::int64_t>();
  r.curve = std::move(curve);
  return r;
}

}  // namespace harness
}  // namespace mbgen
