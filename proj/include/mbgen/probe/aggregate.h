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

// Seed aggregation of learning curves.

#ifndef MBGEN_PROBE_AGGREGATE_H_
#define MBGEN_PROBE_AGGREGATE_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "mbgen/harness/records.h"
#include "mbgen/stats.h"

namespace mbgen {
namespace probe {

struct CurvePoint {
  std::int64_t update_index = 0;
  MeanCi score;
  // Mean of the last (up to) 10 point means.
  double smoothed = 0.0;
};

struct AggregatedCurve {
  std::string config_hash;
  int runs = 0;
  int failed_runs = 0;
  // Set when only one run contributes; its intervals have width 0.
  bool single_seed = false;
  std::vector<CurvePoint> points;
  MeanCi final_score;
};

// Averages non-failed runs point by point. Throws std::invalid_argument for
// an empty input, differing config hashes or differing eval schedules.
AggregatedCurve Aggregate(const std::vector<harness::RunRecord>& records);

// update_index,mean,ci95_half_width,n,smoothed
void WriteAggregateCsv(const AggregatedCurve& curve, std::ostream& out);

}  // namespace probe
}  // namespace mbgen

#endif  // MBGEN_PROBE_AGGREGATE_H_
