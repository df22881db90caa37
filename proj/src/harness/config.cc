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

#include "mbgen/harness/config.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mbgen {
namespace harness {
namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T ParseInteger(const std::string& key, const std::string& text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("config: bad integer for '" + key + "': '" + text + "'");
  }
  return value;
}

bool ParseBool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw std::invalid_argument("config: bad boolean for '" + key + "': '" + text + "'");
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

double ParseDouble(const std::string& text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("bad number '" + text + "'");
  }
  return value;
}

std::vector<int> ParseIntList(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(ParseInteger<int>("list", Trim(item)));
  return out;
}

std::string FormatIntList(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

ConfigMap ParseConfig(std::istream& in) {
  ConfigMap out;
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(number) + ": expected key = value");
    }
    std::string key = Trim(line.substr(0, eq)), value = Trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument("config line " + std::to_string(number) + ": empty key");
    }
    if (!out.emplace(key, value).second) {
      throw std::invalid_argument("config line " + std::to_string(number) + ": repeated key '" +
                                  key + "'");
    }
  }
  return out;
}

ConfigMap LoadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  return ParseConfig(in);
}

void ApplyConfig(const ConfigMap& values, ExperimentConfig* c) {
  for (const auto& [key, v] : values) {
    auto number = [&] {
      try {
        return ParseDouble(v);
      } catch (const std::invalid_argument&) {
        throw std::invalid_argument("config: bad number for '" + key + "': '" + v + "'");
      }
    };
    if (key == "env") c->env.name = v;
    else if (key == "size") c->env.size = ParseInteger<int>(key, v);
    else if (key == "disable_spontaneous") c->env.disable_spontaneous = ParseBool(key, v);
    else if (key == "teleport_horizon") c->env.teleport_horizon = ParseInteger<int>(key, v);
    else if (key == "layout") c->env.layout = v;
    else if (key == "agent") c->agent = agent::ParseAgentKind(v);
    else if (key == "regime") c->regime = v;
    else if (key == "scale") c->scale = number();
    else if (key == "rollout_length") c->rollout_length = ParseInteger<int>(key, v);
    else if (key == "q_step_size") c->q_step_size = number();
    else if (key == "model_step_size") c->model_step_size = number();
    else if (key == "temperature") c->temperature = number();
    else if (key == "discount") c->discount = number();
    else if (key == "target_period") c->target_period = ParseInteger<int>(key, v);
    else if (key == "batch_size") c->batch_size = ParseInteger<int>(key, v);
    else if (key == "model_batch") c->model_batch = ParseInteger<int>(key, v);
    else if (key == "hidden") c->hidden = ParseIntList(v);
    else if (key == "model_hidden") c->model_hidden = ParseIntList(v);
    else if (key == "warmup") c->warmup = ParseInteger<int>(key, v);
    else if (key == "buffer_capacity") c->buffer_capacity = ParseInteger<std::size_t>(key, v);
    else if (key == "eval_interval") c->eval_interval = ParseInteger<int>(key, v);
    else if (key == "eval_episodes") c->eval_episodes = ParseInteger<int>(key, v);
    else if (key == "eval_steps") c->eval_steps = ParseInteger<int>(key, v);
    else if (key == "seeds") c->seeds = ParseInteger<int>(key, v);
    else if (key == "first_seed") c->first_seed = ParseInteger<std::uint64_t>(key, v);
    else if (key == "jobs") c->jobs = ParseInteger<int>(key, v);
    else if (key == "output") c->output = v;
    else throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

ConfigMap ToConfigMap(const ExperimentConfig& c) {
  return {
      {"env", c.env.name},
      {"size", std::to_string(c.env.size)},
      {"disable_spontaneous", c.env.disable_spontaneous ? "true" : "false"},
      {"teleport_horizon", std::to_string(c.env.teleport_horizon)},
      {"layout", c.env.layout},
      {"agent", agent::AgentKindName(c.agent)},
      {"regime", c.regime},
      {"scale", FormatDouble(c.scale)},
      {"rollout_length", std::to_string(c.rollout_length)},
      {"q_step_size", FormatDouble(c.q_step_size)},
      {"model_step_size", FormatDouble(c.model_step_size)},
      {"temperature", FormatDouble(c.temperature)},
      {"discount", FormatDouble(c.discount)},
      {"target_period", std::to_string(c.target_period)},
      {"batch_size", std::to_string(c.batch_size)},
      {"model_batch", std::to_string(c.model_batch)},
      {"hidden", FormatIntList(c.hidden)},
      {"model_hidden", FormatIntList(c.model_hidden)},
      {"warmup", std::to_string(c.warmup)},
      {"buffer_capacity", std::to_string(c.buffer_capacity)},
      {"eval_interval", std::to_string(c.eval_interval)},
      {"eval_episodes", std::to_string(c.eval_episodes)},
      {"eval_steps", std::to_string(c.eval_steps)},
  };
}

std::string CanonicalString(const ExperimentConfig& config) {
  std::string out;
  for (const auto& [key, value] : ToConfigMap(config)) out += key + " = " + value + "\n";
  return out;
}

std::string ConfigHash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : CanonicalString(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

agent::OnlineConfig ToOnlineConfig(const ExperimentConfig& c, std::uint64_t seed) {
  agent::OnlineConfig o;
  o.env = c.env;
  o.agent.kind = c.agent;
  o.agent.batch_size = c.batch_size;
  o.agent.model_batch = c.model_batch;
  o.agent.rollout_length = c.rollout_length;
  o.agent.temperature = c.temperature;
  o.agent.model_step_size = c.model_step_size;
  o.agent.model_hidden = c.model_hidden;
  o.agent.q.step_size = c.q_step_size;
  o.agent.q.discount = c.discount;
  o.agent.q.target_period = c.target_period;
  o.agent.q.hidden = c.hidden;
  agent::ApplyRegime(o, c.regime, c.scale);
  o.warmup = c.warmup;
  o.buffer_capacity = c.buffer_capacity;
  o.eval_interval = c.eval_interval;
  o.eval.episodes = c.eval_episodes;
  o.eval.steps = c.eval_steps;
  o.seed = seed;
  return o;
}

}  // namespace harness
}  // namespace mbgen
