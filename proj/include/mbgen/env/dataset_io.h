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

#ifndef MBGEN_ENV_DATASET_IO_H_
#define MBGEN_ENV_DATASET_IO_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "mbgen/env/environment.h"

namespace mbgen {
namespace env {

// One record per line: obs_bits,action,reward,next_obs_bits,terminal
// Bits are 0/1 strings, reward is written in shortest round-trip form,
// terminal is 0 or 1. Blank lines and '#' comments are skipped on read.
std::string FormatTransition(const Transition& t);
Transition ParseTransition(const std::string& line);

void WriteDataset(std::ostream& out, const std::vector<Transition>& data);
std::vector<Transition> ReadDataset(std::istream& in);

void SaveDataset(const std::string& path, const std::vector<Transition>& data);
std::vector<Transition> LoadDataset(const std::string& path);

}  // namespace env
}  // namespace mbgen

#endif  // MBGEN_ENV_DATASET_IO_H_
