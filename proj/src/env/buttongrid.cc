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

#include "mbgen/env/buttongrid.h"

#include <algorithm>
#include <numeric>

namespace mbgen {
namespace env {

ButtonGrid::ButtonGrid(int button_count, std::uint64_t seed, ButtonGridOptions options)
    : Environment(seed), button_count_(button_count), options_(options) {
  if (button_count < 1 || button_count > kCells) {
    throw std::invalid_argument("ButtonGrid: button_count must be in [1, 25]");
  }
  buttons_.assign(kCells, 0);
}

double ButtonGrid::spontaneous_probability() const {
  return options_.disable_spontaneous ? 0.0 : 0.1 / kCells;
}

void ButtonGrid::RandomizeButtons() {
  std::vector<int> cells(kCells);
  std::iota(cells.begin(), cells.end(), 0);
  // Partial Fisher-Yates: the first button_count_ entries become buttons.
  for (int i = 0; i < button_count_; ++i) {
    int j = std::uniform_int_distribution<int>(i, kCells - 1)(rng_);
    std::swap(cells[i], cells[j]);
  }
  std::fill(buttons_.begin(), buttons_.end(), 0);
  for (int i = 0; i < button_count_; ++i) buttons_[cells[i]] = 1;
}

BitObservation ButtonGrid::Reset() {
  agent_ = std::uniform_int_distribution<int>(0, kCells - 1)(rng_);
  RandomizeButtons();
  return Observe();
}

StepResult ButtonGrid::Step(int action) {
  CheckAction(action);
  const int moved = GridMove(kSize, agent_, action);
  if (moved != agent_) {
    agent_ = moved;
    if (buttons_[agent_]) buttons_[agent_] = buttons_[agent_] == 1 ? 2 : 1;
  }
  const bool all_on =
      std::count(buttons_.begin(), buttons_.end(), 2) == button_count_;
  const bool spontaneous = DrawSpontaneous();
  double reward = 0.0;
  if (all_on || spontaneous) {
    reward = 1.0;
    RandomizeButtons();
  }
  return {Observe(), reward, false};
}

BitObservation ButtonGrid::Observe() const {
  BitObservation obs(3 * kCells);
  obs.Set(agent_, true);
  for (int i = 0; i < kCells; ++i) {
    obs.Set(kCells + i, buttons_[i] == 2);
    obs.Set(2 * kCells + i, buttons_[i] == 1);
  }
  return obs;
}

void ButtonGrid::SetStateFromObservation(const BitObservation& obs) {
  if (static_cast<int>(obs.size()) != 3 * kCells) {
    throw UndecodableObservation("ButtonGrid: observation length mismatch");
  }
  if (obs.Count(0, kCells) != 1) {
    throw UndecodableObservation("ButtonGrid: agent position must be one-hot");
  }
  std::vector<std::uint8_t> buttons(kCells, 0);
  int count = 0, agent = 0;
  for (int i = 0; i < kCells; ++i) {
    if (obs[i]) agent = i;
    const bool on = obs[kCells + i], off = obs[2 * kCells + i];
    if (on && off) throw UndecodableObservation("ButtonGrid: button both on and off");
    if (on || off) {
      buttons[i] = on ? 2 : 1;
      ++count;
    }
  }
  if (count != button_count_) {
    throw UndecodableObservation("ButtonGrid: observation has " + std::to_string(count) +
                                 " buttons, expected " + std::to_string(button_count_));
  }
  agent_ = agent;
  buttons_ = std::move(buttons);
}

std::unique_ptr<Environment> ButtonGrid::Clone(std::uint64_t seed) const {
  return std::make_unique<ButtonGrid>(button_count_, seed, options_);
}

}  // namespace env
}  // namespace mbgen
