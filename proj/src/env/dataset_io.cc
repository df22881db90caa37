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

#include "mbgen/env/dataset_io.h"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace mbgen {
namespace env {

std::string FormatTransition(const Transition& t) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), t.reward);
  std::string out = t.obs.ToString();
  out += ',';
  out += std::to_string(t.action);
  out += ',';
  out.append(buf, end);
  out += ',';
  out += t.next_obs.ToString();
  out += t.terminal ? ",1" : ",0";
  return out;
}

Transition ParseTransition(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (fields.size() != 5) {
    throw std::invalid_argument("dataset record needs 5 fields: '" + line + "'");
  }
  Transition t;
  t.obs = BitObservation::FromString(fields[0]);
  t.next_obs = BitObservation::FromString(fields[3]);
  if (t.obs.size() != t.next_obs.size()) {
    throw std::invalid_argument("dataset record: obs and next_obs differ in length");
  }
  auto parse_int = [&](const std::string& s) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
      throw std::invalid_argument("dataset record: bad integer '" + s + "'");
    }
    return v;
  };
  t.action = parse_int(fields[1]);
  auto [p, ec] = std::from_chars(fields[2].data(), fields[2].data() + fields[2].size(), t.reward);
  if (ec != std::errc() || p != fields[2].data() + fields[2].size()) {
    throw std::invalid_argument("dataset record: bad reward '" + fields[2] + "'");
  }
  int term = parse_int(fields[4]);
  if (term != 0 && term != 1) throw std::invalid_argument("dataset record: terminal must be 0/1");
  t.terminal = term == 1;
  return t;
}

void WriteDataset(std::ostream& out, const std::vector<Transition>& data) {
  for (const Transition& t : data) out << FormatTransition(t) << '\n';
}

std::vector<Transition> ReadDataset(std::istream& in) {
  std::vector<Transition> data;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    try {
      data.push_back(ParseTransition(line));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return data;
}

void SaveDataset(const std::string& path, const std::vector<Transition>& data) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  WriteDataset(out, data);
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

std::vector<Transition> LoadDataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset " + path);
  return ReadDataset(in);
}

}  // namespace env
}  // namespace mbgen
