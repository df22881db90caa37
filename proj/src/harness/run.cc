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

#include "mbgen/harness/run.h"

#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mbgen/nn/checkpoint.h"

namespace mbgen {
namespace harness {
namespace fs = std::filesystem;

void ParallelFor(int n, int jobs, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  jobs = std::max(1, std::min(jobs, n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> workers;
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

void WriteTextFile(const std::string& path, const std::string& text) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

std::string SeedStem(const std::string& dir, std::uint64_t seed) {
  return (fs::path(dir) / ("seed_" + std::to_string(seed))).string();
}

bool TryResume(const std::string& stem, const std::string& hash, RunRecord* out) {
  if (!fs::exists(stem + ".json") || !fs::exists(stem + ".csv")) return false;
  nlohmann::json j = nlohmann::json::parse(ReadTextFile(stem + ".json"));
  if (j.value("config_hash", "") != hash) return false;
  std::ifstream csv(stem + ".csv");
  *out = RecordFromJson(j, ReadCurveCsv(csv));
  return true;
}

}  // namespace

std::vector<RunRecord> RunExperiment(const ExperimentConfig& config, const RunOptions& options) {
  if (config.seeds < 1) throw std::invalid_argument("seeds must be at least 1");
  const std::string hash = ConfigHash(config);
  const bool persist = !config.output.empty();
  if (persist) {
    fs::create_directories(config.output);
    WriteTextFile((fs::path(config.output) / "config.txt").string(), CanonicalString(config));
  }
  std::vector<RunRecord> records(config.seeds);
  std::mutex mu;
  ParallelFor(config.seeds, config.jobs, [&](int i) {
    const std::uint64_t seed = config.first_seed + i;
    const std::string stem = persist ? SeedStem(config.output, seed) : "";
    RunRecord record;
    if (!(persist && options.resume && TryResume(stem, hash, &record))) {
      agent::OnlineConfig online = ToOnlineConfig(config, seed);
      if (persist && !options.model_checkpoints.empty()) {
        const fs::path dir = fs::path(config.output) / "models" / ("seed_" + std::to_string(seed));
        online.model_checkpoints = options.model_checkpoints;
        online.on_model_checkpoint = [dir, hash, seed](std::int64_t update,
                                                       const agent::SimpleDynamicsModel& m) {
          fs::create_directories(dir);
          nn::SaveCheckpoint((dir / ("update_" + std::to_string(update))).string(), m.params(),
                             {{"kind", "dynamics_model"},
                              {"update", update},
                              {"num_actions", m.num_actions()},
                              {"config_hash", hash},
                              {"seed", seed}});
        };
      }
      record = MakeRecord(hash, seed, agent::TrainOnline(online));
      if (persist) {
        std::ostringstream csv;
        WriteCurveCsv(record.curve, csv);
        WriteTextFile(stem + ".csv", csv.str());
        WriteTextFile(stem + ".json", RecordSummaryJson(record).dump(2) + "\n");
      }
    }
    std::lock_guard<std::mutex> lock(mu);
    records[i] = std::move(record);
    if (options.on_record) options.on_record(records[i]);
  });
  if (persist) {
    WriteTextFile((fs::path(config.output) / "summary.json").string(),
                  ExperimentSummaryJson(config, records).dump(2) + "\n");
  }
  return records;
}

MeanCi FinalScoreStats(const std::vector<RunRecord>& records) {
  std::vector<double> scores;
  for (const RunRecord& r : records) {
    if (!r.failed && std::isfinite(r.final_score)) scores.push_back(r.final_score);
  }
  return ComputeMeanCi(scores);
}

nlohmann::json ExperimentSummaryJson(const ExperimentConfig& config,
                                     const std::vector<RunRecord>& records) {
  const MeanCi s = FinalScoreStats(records);
  nlohmann::json config_json;
  for (const auto& [k, v] : ToConfigMap(config)) config_json[k] = v;
  nlohmann::json runs = nlohmann::json::array();
  int failed = 0;
  for (const RunRecord& r : records) {
    failed += r.failed;
    runs.push_back(RecordSummaryJson(r));
  }
  nlohmann::json j = {{"config_hash", ConfigHash(config)},
                      {"config", config_json},
                      {"seeds", records.size()},
                      {"failed_runs", failed},
                      {"final_score",
                       {{"mean", std::isfinite(s.mean) ? nlohmann::json(s.mean) : nullptr},
                        {"ci95_half_width", s.half_width},
                        {"n", s.n},
                        {"single_seed", s.single}}},
                      {"hyperparameters",
                       {{"q_step_size", config.q_step_size},
                        {"temperature", config.temperature},
                        {"model_step_size", config.model_step_size},
                        {"rollout_length", config.rollout_length}}},
                      {"runs", runs}};
  return j;
}

}  // namespace harness
}  // namespace mbgen
