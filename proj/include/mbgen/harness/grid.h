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

// Step-size x temperature grid search with boundary extension.

#ifndef MBGEN_HARNESS_GRID_H_
#define MBGEN_HARNESS_GRID_H_

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mbgen/harness/config.h"
#include "mbgen/stats.h"

namespace mbgen {
namespace harness {

struct GridSpec {
  std::vector<double> step_sizes = {1.25e-5, 2.5e-5, 5e-5, 1e-4, 2e-4,
                                    4e-4,    8e-4,   1.6e-3, 3.2e-3};
  std::vector<double> temperatures = {0.0125, 0.025, 0.05, 0.1, 0.2, 0.4, 0.8, 1.6, 3.2};
  // Times a hyperparameter range may grow by one octave when the best cell
  // sits on its boundary.
  int max_extensions = 2;

  // Throws std::invalid_argument unless both sets are nonempty, positive and
  // strictly increasing.
  void Validate() const;
};

struct GridCell {
  double step_size = 0.0;
  double temperature = 0.0;
  MeanCi score;
  int failed_runs = 0;
};

struct GridResult {
  // Every evaluated cell, ordered by (step_size, temperature).
  std::vector<GridCell> table;
  GridCell best;
  // Scores across step sizes at the best temperature, and across
  // temperatures at the best step size.
  std::vector<GridCell> step_slice;
  std::vector<GridCell> temperature_slice;
  std::vector<double> step_sizes;
  std::vector<double> temperatures;
  int extensions = 0;
};

using CellEvaluator = std::function<GridCell(double step_size, double temperature)>;

// Evaluates the full grid, picks the highest mean score (ties toward the
// smaller step size, then the smaller temperature) and, while the pick lies
// on a boundary of a range with extensions left, adds one octave beyond it.
GridResult GridSearch(const GridSpec& grid, const CellEvaluator& evaluate);

// Evaluator running `base` with each cell's hyperparameters. Each cell writes
// under <base.output>/cells/<hash>/ when base.output is set.
CellEvaluator ExperimentEvaluator(const ExperimentConfig& base);

// Intermediate tuning instance: procmaze 4, buttongrid 4, panflute 7,
// opengrid 12.
env::EnvSpec TuningEnvironment(const std::string& name);

nlohmann::json GridResultJson(const GridResult& result);
// step_size,temperature,mean,ci95_half_width,n,failed_runs
void WriteGridCsv(const std::vector<GridCell>& cells, std::ostream& out);

}  // namespace harness
}  // namespace mbgen

#endif  // MBGEN_HARNESS_GRID_H_
