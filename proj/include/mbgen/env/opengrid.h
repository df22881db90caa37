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

#ifndef MBGEN_ENV_OPENGRID_H_
#define MBGEN_ENV_OPENGRID_H_

#include "mbgen/env/environment.h"

namespace mbgen {
namespace env {

struct OpenGridOptions {
  bool disable_spontaneous = false;
};

// Open n x n grid, goal in the bottom-right corner, random non-goal start.
// The observation is the agent's one-hot position only. Four cardinal moves,
// reward -1 per step, spontaneous teleport to the goal with probability 0.1/n.
class OpenGrid final : public Environment {
 public:
  OpenGrid(int size, std::uint64_t seed, OpenGridOptions options = {});

  std::string name() const override { return "opengrid"; }
  int observation_size() const override { return size_ * size_; }
  int num_actions() const override { return 4; }
  bool episodic() const override { return true; }

  BitObservation Reset() override;
  StepResult Step(int action) override;
  BitObservation Observe() const override;
  void SetStateFromObservation(const BitObservation& obs) override;
  std::unique_ptr<Environment> Clone(std::uint64_t seed) const override;
  double spontaneous_probability() const override;
  int episode_cap() const override { return 4 * size_ * size_; }

  int size() const { return size_; }
  int goal() const { return size_ * size_ - 1; }
  int agent() const { return agent_; }
  // Places the agent directly (for oracles and tests).
  void SetAgent(int cell);

 private:
  int size_;
  OpenGridOptions options_;
  int agent_ = 0;
  bool done_ = true;
};

}  // namespace env
}  // namespace mbgen

#endif  // MBGEN_ENV_OPENGRID_H_
