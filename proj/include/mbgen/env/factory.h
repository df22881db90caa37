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

#ifndef MBGEN_ENV_FACTORY_H_
#define MBGEN_ENV_FACTORY_H_

#include <memory>
#include <string>

#include "mbgen/env/environment.h"

namespace mbgen {
namespace env {

struct EnvSpec {
  // procmaze, buttongrid, panflute, opengrid or maze3.
  std::string name = "panflute";
  // Grid side for procmaze/opengrid, button count for buttongrid, pipe count
  // for panflute; ignored for maze3.
  int size = 7;
  bool disable_spontaneous = false;
  // ProcMaze teleport constant; 0 selects size^2.
  int teleport_horizon = 0;
  // maze3 only.
  std::string layout = "lower";
};

std::unique_ptr<Environment> MakeEnvironment(const EnvSpec& spec, std::uint64_t seed);

}  // namespace env
}  // namespace mbgen

#endif  // MBGEN_ENV_FACTORY_H_
