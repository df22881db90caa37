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

#include "mbgen/probe/aggregate.h"

#include <stdexcept>

namespace mbgen {
namespace probe {

AggregatedCurve Aggregate(const std::vector<harness::RunRecord>& records) {
  if (records.empty()) throw std::invalid_argument("aggregate: no records");
  AggregatedCurve out;
  out.config_hash = records[0].config_hash;
  out.runs = static_cast<int>(records.size());
  std::vector<const harness::RunRecord*> ok;
  for (const harness::RunRecord& r : records) {
    if (r.config_hash != out.config_hash) {
      throw std::invalid_argument("aggregate: records from different configs");
    }
    if (r.failed) {
      ++out.failed_runs;
    } else {
      ok.push_back(&r);
    }
  }
  if (ok.empty()) return out;
  const auto& schedule = ok[0]->curve;
  for (const auto* r : ok) {
    if (r->curve.size() != schedule.size()) {
      throw std::invalid_argument("aggregate: runs have different eval schedules");
    }
    for (std::size_t i = 0; i < schedule.size(); ++i) {
      if (r->curve[i].update_index != schedule[i].update_index) {
        throw std::invalid_argument("aggregate: runs have different eval schedules");
      }
    }
  }
  out.single_seed = ok.size() == 1;
  std::vector<double> finals;
  for (const auto* r : ok) finals.push_back(r->final_score);
  out.final_score = ComputeMeanCi(finals);
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    std::vector<double> values;
    for (const auto* r : ok) values.push_back(r->curve[i].eval_score);
    CurvePoint p;
    p.update_index = schedule[i].update_index;
    p.score = ComputeMeanCi(values);
    out.points.push_back(p);
    const std::size_t begin = i >= 9 ? i - 9 : 0;
    double sum = 0.0;
    for (std::size_t j = begin; j <= i; ++j) sum += out.points[j].score.mean;
    out.points.back().smoothed = sum / (i - begin + 1);
  }
  return out;
}

void WriteAggregateCsv(const AggregatedCurve& curve, std::ostream& out) {
  out << "update_index,mean,ci95_half_width,n,smoothed\n";
  for (const CurvePoint& p : curve.points) {
    out << p.update_index << ',' << p.score.mean << ',' << p.score.half_width << ','
        << p.score.n << ',' << p.smoothed << '\n';
  }
}

}  // namespace probe
}  // namespace mbgen
