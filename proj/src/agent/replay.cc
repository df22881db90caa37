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

#include "mbgen/agent/replay.h"

#include <stdexcept>

namespace mbgen {
namespace agent {

void TransitionBatch::Reserve(int rows, int obs_size) {
  obs.resize(rows, obs_size);
  next_obs.resize(rows, obs_size);
  action.clear();
  reward.clear();
  terminal.clear();
  action.reserve(rows);
  reward.reserve(rows);
  terminal.reserve(rows);
  rows_ = rows;
}

void TransitionBatch::Append(const float* obs_row, int a, float r, const float* next_row,
                             bool term) {
  const int i = size();
  if (i >= rows_) {
    // Grow geometrically; rows past size() are scratch.
    const int grown = std::max(1, 2 * rows_);
    obs.conservativeResize(grown, obs.cols());
    next_obs.conservativeResize(grown, next_obs.cols());
    rows_ = grown;
  }
  const int d = static_cast<int>(obs.cols());
  std::copy(obs_row, obs_row + d, obs.row(i).data());
  std::copy(next_row, next_row + d, next_obs.row(i).data());
  action.push_back(a);
  reward.push_back(r);
  terminal.push_back(term ? 1 : 0);
}

void TransitionBatch::Clear() {
  action.clear();
  reward.clear();
  terminal.clear();
}

void TransitionBatch::Trim() {
  obs.conservativeResize(size(), obs.cols());
  next_obs.conservativeResize(size(), next_obs.cols());
  rows_ = size();
}

env::Transition TransitionBatch::Row(int i) const {
  env::Transition t;
  const int d = static_cast<int>(obs.cols());
  std::vector<std::uint8_t> a(d), b(d);
  for (int j = 0; j < d; ++j) {
    a[j] = obs(i, j) > 0.5f;
    b[j] = next_obs(i, j) > 0.5f;
  }
  t.obs = env::BitObservation(std::move(a));
  t.next_obs = env::BitObservation(std::move(b));
  t.action = action[i];
  t.reward = reward[i];
  t.terminal = terminal[i];
  return t;
}

TransitionBatch TransitionBatch::FromTransitions(const std::vector<env::Transition>& data) {
  TransitionBatch batch;
  const int d = data.empty() ? 0 : static_cast<int>(data[0].obs.size());
  batch.Reserve(static_cast<int>(data.size()), d);
  std::vector<float> a(d), b(d);
  for (const env::Transition& t : data) {
    for (int j = 0; j < d; ++j) {
      a[j] = t.obs[j];
      b[j] = t.next_obs[j];
    }
    batch.Append(a.data(), t.action, static_cast<float>(t.reward), b.data(), t.terminal);
  }
  return batch;
}

Matrix<float> ObservationMatrix(const std::vector<env::BitObservation>& obs) {
  const int d = obs.empty() ? 0 : static_cast<int>(obs[0].size());
  Matrix<float> m(obs.size(), d);
  for (std::size_t i = 0; i < obs.size(); ++i) {
    for (int j = 0; j < d; ++j) m(i, j) = obs[i][j];
  }
  return m;
}

ReplayBuffer::ReplayBuffer(std::size_t capacity, int obs_size)
    : capacity_(capacity), obs_size_(obs_size) {
  if (capacity == 0 || obs_size <= 0) throw std::invalid_argument("ReplayBuffer: empty shape");
  obs_.assign(capacity * obs_size, 0);
  next_obs_.assign(capacity * obs_size, 0);
  terminal_.assign(capacity, 0);
  action_.assign(capacity, 0);
  reward_.assign(capacity, 0.0f);
}

void ReplayBuffer::Add(const env::Transition& t) {
  if (static_cast<int>(t.obs.size()) != obs_size_ ||
      static_cast<int>(t.next_obs.size()) != obs_size_) {
    throw std::invalid_argument("ReplayBuffer: observation size mismatch");
  }
  const std::size_t slot = head_;
  std::copy(t.obs.bits().begin(), t.obs.bits().end(), obs_.begin() + slot * obs_size_);
  std::copy(t.next_obs.bits().begin(), t.next_obs.bits().end(),
            next_obs_.begin() + slot * obs_size_);
  action_[slot] = t.action;
  reward_[slot] = static_cast<float>(t.reward);
  terminal_[slot] = t.terminal;
  head_ = (head_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
  ++inserted_;
}

std::size_t ReplayBuffer::Slot(std::size_t i) const {
  if (i >= size_) throw std::out_of_range("ReplayBuffer: index past contents");
  return (head_ + capacity_ - size_ + i) % capacity_;
}

env::Transition ReplayBuffer::Get(std::size_t i) const {
  const std::size_t s = Slot(i);
  env::Transition t;
  t.obs = env::BitObservation(std::vector<std::uint8_t>(
      obs_.begin() + s * obs_size_, obs_.begin() + (s + 1) * obs_size_));
  t.next_obs = env::BitObservation(std::vector<std::uint8_t>(
      next_obs_.begin() + s * obs_size_, next_obs_.begin() + (s + 1) * obs_size_));
  t.action = action_[s];
  t.reward = reward_[s];
  t.terminal = terminal_[s];
  return t;
}

std::vector<std::size_t> ReplayBuffer::SampleIndices(int n, Rng& rng) const {
  if (size_ == 0) throw std::logic_error("ReplayBuffer: sampling from an empty buffer");
  std::uniform_int_distribution<std::size_t> pick(0, size_ - 1);
  std::vector<std::size_t> idx(n);
  for (auto& i : idx) i = pick(rng);
  return idx;
}

TransitionBatch ReplayBuffer::Gather(const std::vector<std::size_t>& indices) const {
  TransitionBatch batch;
  batch.Reserve(static_cast<int>(indices.size()), obs_size_);
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const std::size_t s = Slot(indices[r]);
    const std::uint8_t* o = obs_.data() + s * obs_size_;
    const std::uint8_t* n = next_obs_.data() + s * obs_size_;
    for (int j = 0; j < obs_size_; ++j) {
      batch.obs(r, j) = o[j];
      batch.next_obs(r, j) = n[j];
    }
    batch.action.push_back(action_[s]);
    batch.reward.push_back(reward_[s]);
    batch.terminal.push_back(terminal_[s]);
  }
  return batch;
}

}  // namespace agent
}  // namespace mbgen
