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

#ifndef MBGEN_STATS_H_
#define MBGEN_STATS_H_

#include <cmath>
#include <span>

namespace mbgen {

// Sample mean with a 95% normal-approximation interval (1.96 s / sqrt(n)).
// A single value gets width 0 and is flagged.
struct MeanCi {
  double mean = 0.0;
  double half_width = 0.0;
  int n = 0;
  bool single = false;

  double lower() const { return mean - half_width; }
  double upper() const { return mean + half_width; }
};

inline MeanCi ComputeMeanCi(std::span<const double> values) {
  MeanCi out;
  out.n = static_cast<int>(values.size());
  if (out.n == 0) {
    out.mean = std::nan("");
    return out;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / out.n;
  out.single = out.n == 1;
  if (out.single) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.half_width = 1.96 * std::sqrt(ss / (out.n - 1)) / std::sqrt(static_cast<double>(out.n));
  return out;
}

}  // namespace mbgen

#endif  // MBGEN_STATS_H_
