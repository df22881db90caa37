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

#ifndef MBGEN_AGENT_REPLAY_H_
#define MBGEN_AGENT_REPLAY_H_

#include <cstdint>
#include <random>
#include <vector>

#include "mbgen/env/environment.h"
#include "mbgen/nn/mlp.h"

namespace mbgen {
namespace agent {

using Rng = std::mt19937_64;
using nn::Matrix;

// Transitions laid out for batched network passes; observations are rows.
struct TransitionBatch {
  Matrix<float> obs;
  std::vector<int> action;
  std::vector<float> reward;
  Matrix<float> next_obs;
  std::vector<std::uint8_t> terminal;

  int size() const { return static_cast<int>(action.size()); }
  void Reserve(int rows, int obs_size);
  // Appends one row; the matrices grow in place up to the reserved rows.
  void Append(const float* obs_row, int action, float reward, const float* next_row,
              bool terminal);
  void Clear();
  // Drops scratch rows so the matrices hold exactly size() rows.
  void Trim();
  env::Transition Row(int i) const;
  static TransitionBatch FromTransitions(const std::vector<env::Transition>& data);

 private:
  int rows_ = 0;
};

Matrix<float> ObservationMatrix(const std::vector<env::BitObservation>& obs);

// Fixed-capacity ring buffer of transitions with uniform sampling.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, int obs_size);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return size_; }
  std::int64_t inserted() const { return inserted_; }
  int obs_size() const { return obs_size_; }

  void Add(const env::Transition& t);
  // Slot i in insertion order among the current contents (0 = oldest).
  env::Transition Get(std::size_t i) const;

  // n indices drawn uniformly with replacement over current contents.
  std::vector<std::size_t> SampleIndices(int n, Rng& rng) const;
  TransitionBatch Gather(const std::vector<std::size_t>& indices) const;
  TransitionBatch Sample(int n, Rng& rng) const { return Gather(SampleIndices(n, rng)); }

 private:
  std::size_t Slot(std::size_t i) const;

  std::size_t capacity_;
  int obs_size_;
  std::size_t size_ = 0;
  std::size_t head_ = 0;
  std::int64_t inserted_ = 0;
  std::vector<std::uint8_t> obs_, next_obs_, terminal_;
  std::vector<int> action_;
  std::vector<float> reward_;
};

}  // namespace agent
}  // namespace mbgen

#endif  // MBGEN_AGENT_REPLAY_H_
