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

#ifndef MBGEN_ENV_ENVIRONMENT_H_
#define MBGEN_ENV_ENVIRONMENT_H_

#include <compare>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mbgen {
namespace env {

using Rng = std::mt19937_64;

// Fixed-length binary feature vector. Every agent and model consumes these.
class BitObservation {
 public:
  BitObservation() = default;
  explicit BitObservation(std::size_t size) : bits_(size, 0) {}
  explicit BitObservation(std::vector<std::uint8_t> bits);

  // Parses a string of '0'/'1' characters.
  static BitObservation FromString(std::string_view text);
  std::string ToString() const;

  std::size_t size() const { return bits_.size(); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  void Set(std::size_t i, bool on) { bits_[i] = on ? 1 : 0; }
  std::span<const std::uint8_t> bits() const { return bits_; }
  int Count() const;
  int Count(std::size_t begin, std::size_t end) const;

  friend bool operator==(const BitObservation&, const BitObservation&) = default;
  friend auto operator<=>(const BitObservation&, const BitObservation&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

struct Transition {
  BitObservation obs;
  int action = 0;
  double reward = 0.0;
  BitObservation next_obs;
  bool terminal = false;

  friend bool operator==(const Transition&, const Transition&) = default;
};

struct StepResult {
  BitObservation obs;
  double reward = 0.0;
  bool terminal = false;
};

// Thrown by SetStateFromObservation for vectors that encode no valid state.
class UndecodableObservation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A single-owner, internally mutable environment instance with its own
// seeded random stream. Fully observable: the observation determines the
// internal state, which is what lets the perfect model roll out from
// replayed observations.
class Environment {
 public:
  explicit Environment(std::uint64_t seed) : rng_(seed) {}
  virtual ~Environment() = default;

  virtual std::string name() const = 0;
  virtual int observation_size() const = 0;
  virtual int num_actions() const = 0;
  virtual bool episodic() const = 0;

  virtual BitObservation Reset() = 0;
  virtual StepResult Step(int action) = 0;
  virtual BitObservation Observe() const = 0;
  virtual void SetStateFromObservation(const BitObservation& obs) = 0;

  // Same configuration, fresh state, independent stream.
  virtual std::unique_ptr<Environment> Clone(std::uint64_t seed) const = 0;

  // Per-step probability of the spontaneous rewarding/terminal event, 0 when
  // disabled.
  virtual double spontaneous_probability() const = 0;
  std::int64_t spontaneous_events() const { return spontaneous_events_; }

  // Step cap for greedy evaluation episodes (episodic environments only).
  virtual int episode_cap() const { return 0; }

 protected:
  // Draws the spontaneous event for this step.
  bool DrawSpontaneous();
  void CheckAction(int action) const;

  Rng rng_;
  std::int64_t spontaneous_events_ = 0;
};

// Grid movement shared by the grid worlds. Rows are indexed top-down.
enum GridAction : int { kUp = 0, kDown = 1, kLeft = 2, kRight = 3, kNoop = 4 };

// Cell reached by `action` from `cell` on an n x n grid, ignoring walls;
// returns `cell` when the move would leave the grid.
int GridMove(int n, int cell, int action);

}  // namespace env
}  // namespace mbgen

#endif  // MBGEN_ENV_ENVIRONMENT_H_
