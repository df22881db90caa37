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

#include "mbgen/env/procmaze.h"

#include <algorithm>

namespace mbgen {
namespace env {

std::vector<std::uint8_t> GenerateDfsMaze(int n, Rng& rng) {
  if (n < 2) throw std::invalid_argument("maze size must be at least 2");
  const int cells = n * n;
  std::vector<std::uint8_t> open(cells, 0);
  auto open_neighbours = [&](int cell) {
    int count = 0;
    for (int a = kUp; a <= kRight; ++a) {
      int m = GridMove(n, cell, a);
      if (m != cell && open[m]) ++count;
    }
    return count;
  };
  int start = std::uniform_int_distribution<int>(0, cells - 1)(rng);
  open[start] = 1;
  std::vector<int> stack{start};
  std::vector<int> candidates;
  while (!stack.empty()) {
    const int cur = stack.back();
    candidates.clear();
    for (int a = kUp; a <= kRight; ++a) {
      int m = GridMove(n, cur, a);
      if (m != cur && !open[m] && open_neighbours(m) == 1) candidates.push_back(m);
    }
    if (candidates.empty()) {
      stack.pop_back();
      continue;
    }
    int pick = candidates[std::uniform_int_distribution<int>(
        0, static_cast<int>(candidates.size()) - 1)(rng)];
    open[pick] = 1;
    stack.push_back(pick);
  }
  std::vector<std::uint8_t> walls(cells);
  for (int i = 0; i < cells; ++i) walls[i] = open[i] ? 0 : 1;
  return walls;
}

ProcMaze::ProcMaze(int size, std::uint64_t seed, ProcMazeOptions options)
    : Environment(seed), size_(size), options_(options) {
  if (size < 2) throw std::invalid_argument("ProcMaze: size must be at least 2");
  if (options.teleport_horizon < 0) {
    throw std::invalid_argument("ProcMaze: teleport_horizon must be nonnegative");
  }
  walls_.assign(size * size, 0);
}

int ProcMaze::teleport_horizon() const {
  return options_.teleport_horizon > 0 ? options_.teleport_horizon : size_ * size_;
}

double ProcMaze::spontaneous_probability() const {
  return options_.disable_spontaneous ? 0.0 : 0.1 / teleport_horizon();
}

BitObservation ProcMaze::Reset() {
  walls_ = GenerateDfsMaze(size_, rng_);
  std::vector<int> free_cells;
  for (int i = 0; i < size_ * size_; ++i) {
    if (!walls_[i]) free_cells.push_back(i);
  }
  std::uniform_int_distribution<int> pick(0, static_cast<int>(free_cells.size()) - 1);
  goal_ = free_cells[pick(rng_)];
  do {
    agent_ = free_cells[pick(rng_)];
  } while (agent_ == goal_);
  done_ = false;
  return Observe();
}

StepResult ProcMaze::Step(int action) {
  CheckAction(action);
  if (done_) throw std::logic_error("ProcMaze: Step after terminal; call Reset");
  const int moved = GridMove(size_, agent_, action);
  if (!walls_[moved]) agent_ = moved;
  if (DrawSpontaneous()) agent_ = goal_;
  done_ = agent_ == goal_;
  return {Observe(), -1.0, done_};
}

BitObservation ProcMaze::Observe() const {
  const int cells = size_ * size_;
  BitObservation obs(4 * cells);
  obs.Set(goal_, true);
  obs.Set(cells + agent_, true);
  for (int i = 0; i < cells; ++i) {
    obs.Set(2 * cells + i, walls_[i]);
    obs.Set(3 * cells + i, !walls_[i]);
  }
  return obs;
}

void ProcMaze::SetStateFromObservation(const BitObservation& obs) {
  const int cells = size_ * size_;
  if (static_cast<int>(obs.size()) != 4 * cells) {
    throw UndecodableObservation("ProcMaze: observation length mismatch");
  }
  if (obs.Count(0, cells) != 1 || obs.Count(cells, 2 * cells) != 1) {
    throw UndecodableObservation("ProcMaze: goal and agent must be one-hot");
  }
  std::vector<std::uint8_t> walls(cells);
  for (int i = 0; i < cells; ++i) {
    if (obs[2 * cells + i] == obs[3 * cells + i]) {
      throw UndecodableObservation("ProcMaze: wall vectors are not complementary");
    }
    walls[i] = obs[2 * cells + i];
  }
  int goal = 0, agent = 0;
  for (int i = 0; i < cells; ++i) {
    if (obs[i]) goal = i;
    if (obs[cells + i]) agent = i;
  }
  if (walls[goal] || walls[agent]) {
    throw UndecodableObservation("ProcMaze: agent or goal inside a wall");
  }
  walls_ = std::move(walls);
  goal_ = goal;
  agent_ = agent;
  done_ = agent_ == goal_;
}

std::unique_ptr<Environment> ProcMaze::Clone(std::uint64_t seed) const {
  return std::make_unique<ProcMaze>(size_, seed, options_);
}

}  // namespace env
}  // namespace mbgen
