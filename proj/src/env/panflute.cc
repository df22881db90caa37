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

#include "mbgen/env/panflute.h"

namespace mbgen {
namespace env {

PanFlute::PanFlute(int pipes, std::uint64_t seed, PanFluteOptions options)
    : Environment(seed), pipes_(pipes), options_(options) {
  if (pipes < 1) throw std::invalid_argument("PanFlute: need at least one pipe");
  cells_ = BitObservation(observation_size());
}

int PanFlute::CellIndex(int pipes, int k, int i) {
  // Pipes 0..k-1 precede pipe k; pipe j holds pipes - j cells.
  return k * pipes - k * (k - 1) / 2 + i;
}

int PanFlute::ActiveEnds(int pipes, const BitObservation& obs) {
  int count = 0;
  for (int k = 0; k < pipes; ++k) count += obs[EndIndex(pipes, k)];
  return count;
}

BitObservation PanFlute::Propagate(int pipes, const BitObservation& obs, int action) {
  BitObservation next(obs.size());
  for (int k = 0; k < pipes; ++k) {
    const int len = PipeLength(pipes, k);
    for (int i = 0; i + 1 < len; ++i) {
      next.Set(CellIndex(pipes, k, i + 1), obs[CellIndex(pipes, k, i)]);
    }
  }
  next.Set(CellIndex(pipes, action, 0), true);
  return next;
}

double PanFlute::spontaneous_probability() const {
  return options_.disable_spontaneous ? 0.0 : 1.0 / (pipes_ * pipes_);
}

BitObservation PanFlute::Reset() {
  cells_ = BitObservation(observation_size());
  return Observe();
}

StepResult PanFlute::Step(int action) {
  CheckAction(action);
  const double reward = AllEndsActive(pipes_, cells_) ? 1.0 : 0.0;
  cells_ = Propagate(pipes_, cells_, action);
  if (DrawSpontaneous()) {
    for (int k = 0; k < pipes_; ++k) cells_.Set(EndIndex(pipes_, k), true);
  }
  return {Observe(), reward, false};
}

BitObservation PanFlute::Observe() const { return cells_; }

void PanFlute::SetStateFromObservation(const BitObservation& obs) {
  if (static_cast<int>(obs.size()) != observation_size()) {
    throw UndecodableObservation("PanFlute: observation length mismatch");
  }
  cells_ = obs;
}

std::unique_ptr<Environment> PanFlute::Clone(std::uint64_t seed) const {
  return std::make_unique<PanFlute>(pipes_, seed, options_);
}

}  // namespace env
}  // namespace mbgen
