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

#include "mbgen/env/factory.h"

#include "mbgen/env/buttongrid.h"
#include "mbgen/env/illustrative_maze.h"
#include "mbgen/env/opengrid.h"
#include "mbgen/env/panflute.h"
#include "mbgen/env/procmaze.h"

namespace mbgen {
namespace env {

std::unique_ptr<Environment> MakeEnvironment(const EnvSpec& spec, std::uint64_t seed) {
  if (spec.name == "procmaze") {
    return std::make_unique<ProcMaze>(
        spec.size, seed, ProcMazeOptions{spec.teleport_horizon, spec.disable_spontaneous});
  }
  if (spec.name == "buttongrid") {
    return std::make_unique<ButtonGrid>(spec.size, seed,
                                        ButtonGridOptions{spec.disable_spontaneous});
  }
  if (spec.name == "panflute") {
    return std::make_unique<PanFlute>(spec.size, seed, PanFluteOptions{spec.disable_spontaneous});
  }
  if (spec.name == "opengrid") {
    return std::make_unique<OpenGrid>(spec.size, seed, OpenGridOptions{spec.disable_spontaneous});
  }
  if (spec.name == "maze3") {
    return std::make_unique<IllustrativeMaze>(ParseMazeLayout(spec.layout), seed);
  }
  throw std::invalid_argument("unknown environment '" + spec.name +
                              "' (expected procmaze, buttongrid, panflute, opengrid, maze3)");
}

}  // namespace env
}  // namespace mbgen
