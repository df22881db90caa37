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

// Probes over agents trained on the offline 3x3 maze.

#ifndef MBGEN_PROBE_MAZE_H_
#define MBGEN_PROBE_MAZE_H_

#include <array>
#include <ostream>
#include <vector>

#include "mbgen/agent/dynamics_model.h"
#include "mbgen/env/illustrative_maze.h"
#include "mbgen/nn/mlp.h"

namespace mbgen {
namespace probe {

struct CorrectnessGrid {
  env::MazeLayout layout;
  int seeds = 0;
  // Per cell: optimal actions, and how often (over seeds) each action was
  // greedy. Frequencies are zero for walls, the goal and excluded cells.
  std::vector<std::vector<int>> optimal;
  std::vector<std::array<double, env::kMazeActions>> frequency;
  std::vector<bool> evaluated;
  // Free cells that cannot reach the goal; not evaluated.
  std::vector<int> excluded;
  // Cells where a majority of seeds pick a non-optimal action.
  std::vector<int> failing;
  bool pass = false;

  // Fraction of seeds whose greedy action at `cell` is optimal.
  double Correct(int cell) const;
};

// Greedy action (lowest index on ties) of each Q-network at every free cell.
// The verdict fails iff some cell has strictly more than half of the seeds
// choosing a non-optimal action.
CorrectnessGrid CellCorrectness(const std::vector<nn::MlpParams<float>>& qnets,
                                const env::MazeLayout& layout);

// cell,row,col,evaluated,optimal,freq_0..freq_4,correct
void WriteCorrectnessCsv(const CorrectnessGrid& grid, std::ostream& out);

// Fraction of transitions whose most probable predicted agent-position bit
// is the true next position.
double ModelPositionAccuracy(const agent::SimpleDynamicsModel& model,
                             const std::vector<env::Transition>& transitions);
// Same measure for the true dynamics, decoding each observation.
double ModelPositionAccuracy(env::Environment& simulator,
                             const std::vector<env::Transition>& transitions);

}  // namespace probe
}  // namespace mbgen

#endif  // MBGEN_PROBE_MAZE_H_
