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

#ifndef MBGEN_ENV_PROCMAZE_H_
#define MBGEN_ENV_PROCMAZE_H_

#include <vector>

#include "mbgen/env/environment.h"

namespace mbgen {
namespace env {

struct ProcMazeOptions {
  // T in the teleport probability 0.1 / T; 0 selects size^2.
  int teleport_horizon = 0;
  bool disable_spontaneous = false;
};

// Procedurally generated maze, regenerated every episode. Observation:
// [goal one-hot | agent one-hot | wall | no-wall], each size^2 long.
// Actions: up, down, left, right, no-op. Reward -1 per step; the episode ends
// at the goal. Each step the agent may be teleported to the goal.
class ProcMaze final : public Environment {
 public:
  ProcMaze(int size, std::uint64_t seed, ProcMazeOptions options = {});

  std::string name() const override { return "procmaze"; }
  int observation_size() const override { return 4 * size_ * size_; }
  int num_actions() const override { return 5; }
  bool episodic() const override { return true; }

  BitObservation Reset() override;
  StepResult Step(int action) override;
  BitObservation Observe() const override;
  void SetStateFromObservation(const BitObservation& obs) override;
  std::unique_ptr<Environment> Clone(std::uint64_t seed) const override;
  double spontaneous_probability() const override;
  int episode_cap() const override { return 4 * size_ * size_; }

  int size() const { return size_; }
  int agent() const { return agent_; }
  int goal() const { return goal_; }
  const std::vector<std::uint8_t>& walls() const { return walls_; }
  int teleport_horizon() const;

 private:
  int size_;
  ProcMazeOptions options_;
  std::vector<std::uint8_t> walls_;
  int agent_ = 0;
  int goal_ = 0;
  bool done_ = true;
};

// Randomized depth-first carving on an n x n cell grid: a cell is opened
// only when it touches exactly one open cell, so open cells form a spanning
// tree. Returns the wall mask (1 = wall).
std::vector<std::uint8_t> GenerateDfsMaze(int n, Rng& rng);

}  // namespace env
}  // namespace mbgen

#endif  // MBGEN_ENV_PROCMAZE_H_
