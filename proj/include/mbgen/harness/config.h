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

// Experiment configuration: flat `key = value` files, canonical
// serialization and a stable content hash.

#ifndef MBGEN_HARNESS_CONFIG_H_
#define MBGEN_HARNESS_CONFIG_H_

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "mbgen/agent/training.h"

namespace mbgen {
namespace harness {

using ConfigMap = std::map<std::string, std::string>;

// One `key = value` pair per line; `#` starts a comment, blank lines are
// skipped. Throws std::invalid_argument (with the line number) on malformed
// lines or repeated keys.
ConfigMap ParseConfig(std::istream& in);
ConfigMap LoadConfigFile(const std::string& path);

struct ExperimentConfig {
  env::EnvSpec env;
  agent::AgentKind agent = agent::AgentKind::kExperienceReplay;
  std::string regime = "low";
  // Divides the environment step count of the regime.
  double scale = 1.0;
  int rollout_length = 10;
  double q_step_size = 1e-4;
  double model_step_size = 2e-4;
  double temperature = 0.1;
  double discount = 0.9;
  int target_period = 100;
  int batch_size = 320;
  int model_batch = 32;
  std::vector<int> hidden = {200, 200, 200};
  std::vector<int> model_hidden = {200, 200, 200};
  int warmup = 1000;
  std::size_t buffer_capacity = 100000;
  int eval_interval = 5000;
  int eval_episodes = 10;
  int eval_steps = 1000;

  // Execution settings; not part of the hash.
  int seeds = 30;
  std::uint64_t first_seed = 0;
  int jobs = 1;
  std::string output;
};

// Overrides fields named in `values`; throws std::invalid_argument for
// unknown keys or unparsable values.
void ApplyConfig(const ConfigMap& values, ExperimentConfig* config);

// Every result-affecting field, with doubles in shortest round-trip form.
ConfigMap ToConfigMap(const ExperimentConfig& config);
std::string CanonicalString(const ExperimentConfig& config);
// FNV-1a 64 over the canonical string, as 16 hex digits.
std::string ConfigHash(const ExperimentConfig& config);

agent::OnlineConfig ToOnlineConfig(const ExperimentConfig& config, std::uint64_t seed);

// Shortest decimal form that parses back to the same double.
std::string FormatDouble(double value);
double ParseDouble(const std::string& text);
std::vector<int> ParseIntList(const std::string& text);
std::string FormatIntList(const std::vector<int>& values);

}  // namespace harness
}  // namespace mbgen

#endif  // MBGEN_HARNESS_CONFIG_H_
