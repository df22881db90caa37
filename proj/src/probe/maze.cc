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

#include "mbgen/probe/maze.h"

#include <algorithm>
#include <stdexcept>

#include "mbgen/agent/policy.h"
#include "mbgen/agent/replay.h"

namespace mbgen {
namespace probe {
namespace {

int PositionOf(std::span<const std::uint8_t> bits) {
  for (int c = 0; c < env::kMazeCells; ++c) {
    if (bits[c]) return c;
  }
  return -1;
}

}  // namespace

double CorrectnessGrid::Correct(int cell) const {
  double sum = 0.0;
  for (int a : optimal[cell]) sum += frequency[cell][a];
  return sum;
}

CorrectnessGrid CellCorrectness(const std::vector<nn::MlpParams<float>>& qnets,
                                const env::MazeLayout& layout) {
  if (qnets.empty()) throw std::invalid_argument("CellCorrectness: no networks");
  CorrectnessGrid grid;
  grid.layout = layout;
  grid.seeds = static_cast<int>(qnets.size());
  grid.optimal = env::OptimalActions(layout);
  grid.frequency.assign(env::kMazeCells, {});
  grid.evaluated.assign(env::kMazeCells, false);
  const std::vector<int> dist = env::ReachDistance(layout);
  std::vector<int> cells;
  for (int c = 0; c < env::kMazeCells; ++c) {
    if (c == env::kMazeGoal || layout.wall[c]) continue;
    if (dist[c] < 0) {
      grid.excluded.push_back(c);
      continue;
    }
    grid.evaluated[c] = true;
    cells.push_back(c);
  }
  std::vector<env::Transition> rows;
  for (int c : cells) {
    env::BitObservation obs = env::MazeObservation(layout, c);
    rows.push_back({obs, 0, 0.0, obs, false});
  }
  for (const auto& q : qnets) {
    if (q.arch().input != 4 * env::kMazeCells || q.arch().output() != env::kMazeActions) {
      throw std::invalid_argument("CellCorrectness: network does not fit the maze");
    }
  }
  const nn::Matrix<float> inputs =
      cells.empty() ? nn::Matrix<float>() : agent::TransitionBatch::FromTransitions(rows).obs;
  for (const auto& q : qnets) {
    if (cells.empty()) break;
    const nn::Matrix<float> values = nn::Forward(q, inputs);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const int a = agent::GreedyAction(
          std::span<const float>(values.row(i).data(), env::kMazeActions));
      grid.frequency[cells[i]][a] += 1.0 / grid.seeds;
    }
  }
  for (int c : cells) {
    if (1.0 - grid.Correct(c) > 0.5) grid.failing.push_back(c);
  }
  grid.pass = grid.failing.empty();
  return grid;
}

void WriteCorrectnessCsv(const CorrectnessGrid& grid, std::ostream& out) {
  out << "cell,row,col,evaluated,optimal";
  for (int a = 0; a < env::kMazeActions; ++a) out << ",freq_" << a;
  out << ",correct\n";
  for (int c = 0; c < env::kMazeCells; ++c) {
    out << c << ',' << c / env::kMazeSide << ',' << c % env::kMazeSide << ','
        << (grid.evaluated[c] ? 1 : 0) << ',';
    for (std::size_t i = 0; i < grid.optimal[c].size(); ++i) {
      out << (i ? " " : "") << grid.optimal[c][i];
    }
    for (int a = 0; a < env::kMazeActions; ++a) out << ',' << grid.frequency[c][a];
    out << ',' << (grid.evaluated[c] ? grid.Correct(c) : 0.0) << '\n';
  }
}

double ModelPositionAccuracy(const agent::SimpleDynamicsModel& model,
                             const std::vector<env::Transition>& transitions) {
  if (transitions.empty()) return 0.0;
  agent::TransitionBatch batch = agent::TransitionBatch::FromTransitions(transitions);
  agent::ModelPrediction p = model.Predict(batch.obs, batch.action);
  int hits = 0;
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    Eigen::Index best;
    p.next_feature_probs.row(i).head(env::kMazeCells).maxCoeff(&best);
    hits += best == PositionOf(transitions[i].next_obs.bits());
  }
  return static_cast<double>(hits) / transitions.size();
}

double ModelPositionAccuracy(env::Environment& simulator,
                             const std::vector<env::Transition>& transitions) {
  if (transitions.empty()) return 0.0;
  int hits = 0;
  for (const env::Transition& t : transitions) {
    simulator.SetStateFromObservation(t.obs);
    env::StepResult r = simulator.Step(t.action);
    hits += PositionOf(r.obs.bits()) == PositionOf(t.next_obs.bits());
  }
  return static_cast<double>(hits) / transitions.size();
}

}  // namespace probe
}  // namespace mbgen
