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

#include "mbgen/env/opengrid.h"

namespace mbgen {
namespace env {

OpenGrid::OpenGrid(int size, std::uint64_t seed, OpenGridOptions options)
    : Environment(seed), size_(size), options_(options) {
  if (size < 2) throw std::invalid_argument("OpenGrid: size must be at least 2");
}

double OpenGrid::spontaneous_probability() const {
  return options_.disable_spontaneous ? 0.0 : 0.1 / size_;
}

BitObservation OpenGrid::Reset() {
  agent_ = std::uniform_int_distribution<int>(0, goal() - 1)(rng_);
  done_ = false;
  return Observe();
}

void OpenGrid::SetAgent(int cell) {
  if (cell < 0 || cell >= size_ * size_) throw std::out_of_range("OpenGrid: bad cell");
  agent_ = cell;
  done_ = agent_ == goal();
}

StepResult OpenGrid::Step(int action) {
  CheckAction(action);
  if (done_) throw std::logic_error("OpenGrid: Step after terminal; call Reset");
  agent_ = GridMove(size_, agent_, action);
  if (DrawSpontaneous()) agent_ = goal();
  done_ = agent_ == goal();
  return {Observe(), -1.0, done_};
}

BitObservation OpenGrid::Observe() const {
  BitObservation obs(size_ * size_);
  obs.Set(agent_, true);
  return obs;
}

void OpenGrid::SetStateFromObservation(const BitObservation& obs) {
  if (static_cast<int>(obs.size()) != size_ * size_ || obs.Count() != 1) {
    throw UndecodableObservation("OpenGrid: expected a one-hot position");
  }
  for (int i = 0; i < size_ * size_; ++i) {
    if (obs[i]) SetAgent(i);
  }
}

std::unique_ptr<Environment> OpenGrid::Clone(std::uint64_t seed) const {
  return std::make_unique<OpenGrid>(size_, seed, options_);
}

}  // namespace env
}  // namespace mbgen
