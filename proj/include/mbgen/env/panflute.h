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

#ifndef MBGEN_ENV_PANFLUTE_H_
#define MBGEN_ENV_PANFLUTE_H_

#include <vector>

#include "mbgen/env/environment.h"

namespace mbgen {
namespace env {

struct PanFluteOptions {
  bool disable_spontaneous = false;
};

// n pipes; pipe k has n - k cells. Action k activates the bottom cell of
// pipe k. Each step:
//   1. reward = 1 iff every pipe end is active in the current state
//   2. activations move up one cell; active ends dissipate
//   3. the chosen pipe's bottom cell activates
//   4. with probability 1/n^2 every pipe end activates
// Observation: one bit per cell, pipe 0 bottom-to-top, then pipe 1, ...
class PanFlute final : public Environment {
 public:
  PanFlute(int pipes, std::uint64_t seed, PanFluteOptions options = {});

  std::string name() const override { return "panflute"; }
  int observation_size() const override { return pipes_ * (pipes_ + 1) / 2; }
  int num_actions() const override { return pipes_; }
  bool episodic() const override { return false; }

  BitObservation Reset() override;
  StepResult Step(int action) override;
  BitObservation Observe() const override;
  void SetStateFromObservation(const BitObservation& obs) override;
  std::unique_ptr<Environment> Clone(std::uint64_t seed) const override;
  double spontaneous_probability() const override;

  int pipes() const { return pipes_; }

  static int PipeLength(int pipes, int k) { return pipes - k; }
  static int CellIndex(int pipes, int k, int i);
  static int EndIndex(int pipes, int k) { return CellIndex(pipes, k, PipeLength(pipes, k) - 1); }
  static int ActiveEnds(int pipes, const BitObservation& obs);
  static bool AllEndsActive(int pipes, const BitObservation& obs) {
    return ActiveEnds(pipes, obs) == pipes;
  }
  // Deterministic part of the transition (steps 2-3).
  static BitObservation Propagate(int pipes, const BitObservation& obs, int action);

 private:
  int pipes_;
  PanFluteOptions options_;
  BitObservation cells_;
};

}  // namespace env
}  // namespace mbgen

#endif  // MBGEN_ENV_PANFLUTE_H_
