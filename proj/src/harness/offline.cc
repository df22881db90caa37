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

#include "mbgen/harness/offline.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "mbgen/agent/training.h"
#include "mbgen/harness/config.h"
#include "mbgen/harness/run.h"
#include "mbgen/nn/checkpoint.h"

namespace mbgen {
namespace harness {
namespace fs = std::filesystem;
namespace {

std::string Fnv(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::optional<nn::Checkpoint> TryLoad(const std::string& stem, const std::string& hash) {
  if (!fs::exists(stem + ".json") || !fs::exists(stem + ".bin")) return std::nullopt;
  nn::Checkpoint c = nn::LoadCheckpoint(stem);
  if (c.metadata.value("cell_hash", "") != hash) return std::nullopt;
  return c;
}

}  // namespace

std::vector<OfflineVariant> DefaultOfflineVariants() {
  return {{"model-free", agent::AgentKind::kExperienceReplay, 1},
          {"1-step", agent::AgentKind::kSimpleModel, 1},
          {"10-step", agent::AgentKind::kSimpleModel, 10}};
}

OfflineVariant ParseOfflineVariant(const std::string& name) {
  for (const OfflineVariant& v : DefaultOfflineVariants()) {
    if (v.name == name) return v;
  }
  throw std::invalid_argument("unknown offline agent '" + name +
                              "' (expected model-free, 1-step or 10-step)");
}

std::string OfflineCellHash(const OfflineSuiteConfig& c, env::CoverageLevel level,
                            const OfflineVariant& v) {
  std::ostringstream s;
  s << "level = " << env::CoverageLevelName(level) << "\nagent = " << agent::AgentKindName(v.kind)
    << "\nrollout_length = " << v.rollout_length << "\nupdates = " << c.updates
    << "\nstep_size = " << FormatDouble(c.step_size)
    << "\ntemperature = " << FormatDouble(c.temperature)
    << "\nhidden = " << FormatIntList(c.hidden)
    << "\nmodel_hidden = " << FormatIntList(c.model_hidden) << "\neval_layouts =";
  for (const env::MazeLayout& l : c.eval_layouts) s << ' ' << l.ToString();
  s << '\n';
  return Fnv(s.str());
}

std::vector<OfflineCellResult> RunOfflineSuite(
    const OfflineSuiteConfig& config,
    const std::function<void(const OfflineCellResult&)>& on_cell) {
  if (config.seeds < 1) throw std::invalid_argument("offline suite: seeds must be at least 1");
  const std::vector<env::Transition> verdict_transitions =
      env::EnumerateLayoutTransitions(config.verdict_layout);
  std::vector<OfflineCellResult> out;
  for (env::CoverageLevel level : config.levels) {
    const std::vector<env::Transition> data =
        env::BuildCoverageDataset(level, config.eval_layouts);
    for (const OfflineVariant& variant : config.variants) {
      const std::string hash = OfflineCellHash(config, level, variant);
      const fs::path dir =
          config.output.empty()
              ? fs::path()
              : fs::path(config.output) / env::CoverageLevelName(level) / variant.name;
      OfflineCellResult cell{level, variant, {}, {}, 0.0};
      cell.qnets.resize(config.seeds);
      std::vector<double> accuracy(config.seeds, std::nan(""));
      ParallelFor(config.seeds, config.jobs, [&](int i) {
        const std::uint64_t seed = config.first_seed + i;
        const std::string q_stem = (dir / ("q_seed_" + std::to_string(seed))).string();
        const std::string m_stem = (dir / ("model_seed_" + std::to_string(seed))).string();
        std::optional<nn::MlpParams<float>> model;
        if (auto q = dir.empty() ? std::nullopt : TryLoad(q_stem, hash)) {
          cell.qnets[i] = q->params;
          if (variant.kind != agent::AgentKind::kExperienceReplay) {
            if (auto m = TryLoad(m_stem, hash)) model = m->params;
          }
        } else {
          agent::OfflineConfig oc;
          oc.agent.kind = variant.kind;
          oc.agent.rollout_length = variant.rollout_length;
          oc.agent.temperature = config.temperature;
          oc.agent.q.step_size = config.step_size;
          oc.agent.q.hidden = config.hidden;
          oc.agent.model_hidden = config.model_hidden;
          oc.updates = config.updates;
          oc.seed = seed;
          oc.num_actions = env::kMazeActions;
          agent::OfflineResult r = agent::TrainOffline(data, oc);
          cell.qnets[i] = r.q;
          model = r.model;
          if (!dir.empty()) {
            const nlohmann::json meta = {{"cell_hash", hash},
                                         {"level", env::CoverageLevelName(level)},
                                         {"agent", variant.name},
                                         {"seed", seed},
                                         {"updates", config.updates}};
            fs::create_directories(dir);
            nn::SaveCheckpoint(q_stem, r.q, meta);
            if (r.model) nn::SaveCheckpoint(m_stem, *r.model, meta);
          }
        }
        if (model) {
          agent::SimpleDynamicsModel m(*model, env::kMazeActions);
          accuracy[i] = probe::ModelPositionAccuracy(m, verdict_transitions);
        }
      });
      cell.grid = probe::CellCorrectness(cell.qnets, config.verdict_layout);
      double sum = 0.0;
      for (double a : accuracy) sum += a;
      cell.position_accuracy = sum / config.seeds;
      if (!dir.empty()) {
        std::ostringstream csv;
        probe::WriteCorrectnessCsv(cell.grid, csv);
        WriteTextFile((dir / "cells.csv").string(), csv.str());
      }
      if (on_cell) on_cell(cell);
      out.push_back(std::move(cell));
    }
  }
  if (!config.output.empty()) {
    WriteTextFile((fs::path(config.output) / "summary.json").string(),
                  OfflineSuiteJson(config, out).dump(2) + "\n");
  }
  return out;
}

nlohmann::json OfflineSuiteJson(const OfflineSuiteConfig& config,
                                const std::vector<OfflineCellResult>& cells) {
  nlohmann::json rows = nlohmann::json::array();
  for (const OfflineCellResult& c : cells) {
    nlohmann::json correct = nlohmann::json::object();
    for (int cell = 0; cell < env::kMazeCells; ++cell) {
      if (c.grid.evaluated[cell]) correct[std::to_string(cell)] = c.grid.Correct(cell);
    }
    rows.push_back({{"coverage", env::CoverageLevelName(c.level)},
                    {"agent", c.variant.name},
                    {"verdict", c.grid.pass ? "pass" : "fail"},
                    {"failing_cells", c.grid.failing},
                    {"correct_fraction", correct},
                    {"position_accuracy", std::isfinite(c.position_accuracy)
                                              ? nlohmann::json(c.position_accuracy)
                                              : nullptr}});
  }
  return {{"seeds", config.seeds},
          {"updates", config.updates},
          {"step_size", config.step_size},
          {"temperature", config.temperature},
          {"verdict_layout", config.verdict_layout.ToString()},
          {"cells", rows}};
}

}  // namespace harness
}  // namespace mbgen
