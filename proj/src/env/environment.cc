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

#include "mbgen/env/environment.h"

#include <numeric>

namespace mbgen {
namespace env {

BitObservation::BitObservation(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (std::uint8_t b : bits_) {
    if (b > 1) throw std::invalid_argument("BitObservation: values must be 0 or 1");
  }
}

BitObservation BitObservation::FromString(std::string_view text) {
  BitObservation obs(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '0' && text[i] != '1') {
      throw std::invalid_argument("BitObservation: expected only '0' and '1', got '" +
                                  std::string(text) + "'");
    }
    obs.bits_[i] = text[i] == '1';
  }
  return obs;
}

std::string BitObservation::ToString() const {
  std::string out(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) out[i] = '1';
  }
  return out;
}

int BitObservation::Count() const { return Count(0, bits_.size()); }

int BitObservation::Count(std::size_t begin, std::size_t end) const {
  return std::accumulate(bits_.begin() + begin, bits_.begin() + end, 0);
}

bool Environment::DrawSpontaneous() {
  const double p = spontaneous_probability();
  if (p <= 0.0) return false;
  const bool fired = std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p;
  if (fired) ++spontaneous_events_;
  return fired;
}

void Environment::CheckAction(int action) const {
  if (action < 0 || action >= num_actions()) {
    throw std::out_of_range(name() + ": action " + std::to_string(action) +
                            " outside [0, " + std::to_string(num_actions()) + ")");
  }
}

int GridMove(int n, int cell, int action) {
  const int r = cell / n, c = cell % n;
  switch (action) {
    case kUp:
      return r > 0 ? cell - n : cell;
    case kDown:
      return r + 1 < n ? cell + n : cell;
    case kLeft:
      return c > 0 ? cell - 1 : cell;
    case kRight:
      return c + 1 < n ? cell + 1 : cell;
    default:
      return cell;
  }
}

}  // namespace env
}  // namespace mbgen
