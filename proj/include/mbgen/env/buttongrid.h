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

#ifndef MBGEN_ENV_BUTTONGRID_H_
#define MBGEN_ENV_BUTTONGRID_H_

#include <vector>

#include "mbgen/env/environment.h"

namespace mbgen {
namespace env {

struct ButtonGridOptions {
  bool disable_spontaneous = false;
};

// Continuing 5x5 grid with buttons toggled by moving onto them.
// Observation: [agent one-hot | button on | button off], 75 bits.
// When every button is on (or, with probability 0.1/25 per step, all switch
// on spontaneously) the transition pays 1 and the successor state has a fresh
// random layout with every button off.
class ButtonGrid final : public Environment {
 public:
  static constexpr int kSize = 5;
  static constexpr int kCells = kSize * kSize;

  ButtonGrid(int button_count, std::uint64_t seed, ButtonGridOptions options = {});

  std::string name() const override { return "buttongrid"; }
  int observation_size() const override { return 3 * kCells; }
  int num_actions() const override { return 5; }
  bool episodic() const override { return false; }

  BitObservation Reset() override;
  StepResult Step(int action) override;
  BitObservation Observe() const override;
  void SetStateFromObservation(const BitObservation& obs) override;
  std::unique_ptr<Environment> Clone(std::uint64_t seed) const override;
  double spontaneous_probability() const override;

  int button_count() const { return button_count_; }
  int agent() const { return agent_; }
  // 0 = no button, 1 = off, 2 = on.
  const std::vector<std::uint8_t>& buttons() const { return buttons_; }

 private:
  void RandomizeButtons();

  int button_count_;
  ButtonGridOptions options_;
  int agent_ = 0;
  std::vector<std::uint8_t> buttons_;
};

}  // namespace env
}  // namespace mbgen

#endif  // MBGEN_ENV_BUTTONGRID_H_
