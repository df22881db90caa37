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

#include "mbgen/harness/grid.h"

#include <algorithm>
#include <filesystem>
#include <map>
#include <stdexcept>

#include "mbgen/harness/run.h"

namespace mbgen {
namespace harness {
namespace {

void CheckRange(const std::vector<double>& values, const char* name) {
  if (values.empty()) throw std::invalid_argument(std::string("grid: empty ") + name);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0)) throw std::invalid_argument(std::string("grid: non-positive ") + name);
    if (i && !(values[i] > values[i - 1])) {
      throw std::invalid_argument(std::string("grid: ") + name + " not strictly increasing");
    }
  }
}

// True when a beats b under the selection order.
bool Better(const GridCell& a, const GridCell& b) {
  if (a.score.mean != b.score.mean) return a.score.mean > b.score.mean;
  if (a.step_size != b.step_size) return a.step_size < b.step_size;
  return a.temperature < b.temperature;
}

nlohmann::json CellJson(const GridCell& c) {
  return {{"step_size", c.step_size},
          {"temperature", c.temperature},
          {"mean", std::isfinite(c.score.mean) ? nlohmann::json(c.score.mean) : nullptr},
          {"ci95_half_width", c.score.half_width},
          {"n", c.score.n},
          {"failed_runs", c.failed_runs}};
}

}  // namespace

void GridSpec::Validate() const {
  CheckRange(step_sizes, "step sizes");
  CheckRange(temperatures, "temperatures");
  if (max_extensions < 0) throw std::invalid_argument("grid: negative extension count");
}

GridResult GridSearch(const GridSpec& grid, const CellEvaluator& evaluate) {
  grid.Validate();
  GridResult result;
  result.step_sizes = grid.step_sizes;
  result.temperatures = grid.temperatures;
  std::map<std::pair<double, double>, GridCell> cells;
  auto fill = [&] {
    for (double s : result.step_sizes) {
      for (double t : result.temperatures) {
        if (cells.count({s, t})) continue;
        GridCell c = evaluate(s, t);
        c.step_size = s;
        c.temperature = t;
        // A cell with no finished runs never wins.
        if (!std::isfinite(c.score.mean)) c.score.mean = -std::numeric_limits<double>::infinity();
        cells[{s, t}] = c;
      }
    }
  };
  auto pick = [&] {
    const GridCell* best = nullptr;
    for (const auto& [key, c] : cells) {
      if (!best || Better(c, *best)) best = &c;
    }
    return *best;
  };
  fill();
  int step_ext = 0, temp_ext = 0;
  for (;;) {
    const GridCell best = pick();
    auto& steps = result.step_sizes;
    auto& temps = result.temperatures;
    bool extended = false;
    if (step_ext < grid.max_extensions && steps.size() > 1) {
      if (best.step_size == steps.front()) {
        steps.insert(steps.begin(), steps.front() / 2);
        extended = true;
      } else if (best.step_size == steps.back()) {
        steps.push_back(steps.back() * 2);
        extended = true;
      }
      step_ext += extended;
    }
    if (!extended && temp_ext < grid.max_extensions && temps.size() > 1) {
      if (best.temperature == temps.front()) {
        temps.insert(temps.begin(), temps.front() / 2);
        extended = true;
      } else if (best.temperature == temps.back()) {
        temps.push_back(temps.back() * 2);
        extended = true;
      }
      temp_ext += extended;
    }
    if (!extended) break;
    ++result.extensions;
    fill();
  }
  for (const auto& [key, c] : cells) result.table.push_back(c);
  result.best = pick();
  for (double s : result.step_sizes) result.step_slice.push_back(cells.at({s, result.best.temperature}));
  for (double t : result.temperatures) {
    result.temperature_slice.push_back(cells.at({result.best.step_size, t}));
  }
  return result;
}

CellEvaluator ExperimentEvaluator(const ExperimentConfig& base) {
  return [base](double step_size, double temperature) {
    ExperimentConfig c = base;
    c.q_step_size = step_size;
    c.temperature = temperature;
    if (!base.output.empty()) {
      c.output = (std::filesystem::path(base.output) / "cells" / ConfigHash(c)).string();
    }
    std::vector<RunRecord> records = RunExperiment(c);
    GridCell cell;
    cell.step_size = step_size;
    cell.temperature = temperature;
    cell.score = FinalScoreStats(records);
    for (const RunRecord& r : records) cell.failed_runs += r.failed;
    return cell;
  };
}

env::EnvSpec TuningEnvironment(const std::string& name) {
  env::EnvSpec spec;
  spec.name = name;
  if (name == "procmaze" || name == "buttongrid") {
    spec.size = 4;
  } else if (name == "panflute") {
    spec.size = 7;
  } else if (name == "opengrid") {
    spec.size = 12;
  } else {
    throw std::invalid_argument("no tuning instance for environment '" + name + "'");
  }
  return spec;
}

nlohmann::json GridResultJson(const GridResult& r) {
  nlohmann::json table = nlohmann::json::array(), steps = nlohmann::json::array(),
                 temps = nlohmann::json::array();
  for (const GridCell& c : r.table) table.push_back(CellJson(c));
  for (const GridCell& c : r.step_slice) steps.push_back(CellJson(c));
  for (const GridCell& c : r.temperature_slice) temps.push_back(CellJson(c));
  return {{"best", CellJson(r.best)},
          {"step_sizes", r.step_sizes},
          {"temperatures", r.temperatures},
          {"extensions", r.extensions},
          {"step_slice", steps},
          {"temperature_slice", temps},
          {"table", table}};
}

void WriteGridCsv(const std::vector<GridCell>& cells, std::ostream& out) {
  out << "step_size,temperature,mean,ci95_half_width,n,failed_runs\n";
  for (const GridCell& c : cells) {
    out << FormatDouble(c.step_size) << ',' << FormatDouble(c.temperature) << ','
        << FormatDouble(c.score.mean) << ',' << FormatDouble(c.score.half_width) << ','
        << c.score.n << ',' << c.failed_runs << '\n';
  }
}

}  // namespace harness
}  // namespace mbgen
