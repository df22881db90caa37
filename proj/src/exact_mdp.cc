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

#include "mbgen/exact_mdp.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <sstream>
#include <utility>

namespace mbgen {
namespace mdp {

RewardTable::RewardTable(int num_states, int num_actions,
                         std::vector<int> values)
    : num_states_(num_states),
      num_actions_(num_actions),
      values_(std::move(values)) {
  if (num_states <= 0 || num_actions <= 0 ||
      values_.size() != static_cast<std::size_t>(num_states) * num_actions) {
    throw std::invalid_argument("RewardTable: shape mismatch");
  }
}

ExplicitMdp ExplicitMdp::Create(int num_states, int num_actions,
                                StateId terminal, std::vector<StateId> next,
                                RewardTable reward,
                                std::vector<std::string> labels) {
  if (num_states <= 0 || num_actions <= 0) {
    throw std::invalid_argument("ExplicitMdp: empty state or action set");
  }
  if (terminal < 0 || terminal >= num_states) {
    throw std::invalid_argument("ExplicitMdp: terminal id out of range");
  }
  const auto cells = static_cast<std::size_t>(num_states) * num_actions;
  if (next.size() != cells) {
    throw std::invalid_argument("ExplicitMdp: next table has wrong size");
  }
  if (reward.num_states() != num_states ||
      reward.num_actions() != num_actions) {
    throw std::invalid_argument("ExplicitMdp: reward table has wrong shape");
  }
  if (!labels.empty() && labels.size() != static_cast<std::size_t>(num_states)) {
    throw std::invalid_argument("ExplicitMdp: label count mismatch");
  }
  for (int s = 0; s < num_states; ++s) {
    if (s == terminal) continue;
    for (int a = 0; a < num_actions; ++a) {
      StateId n = next[static_cast<std::size_t>(s) * num_actions + a];
      if (n < 0 || n >= num_states) {
        throw std::invalid_argument("ExplicitMdp: successor out of range");
      }
    }
  }

  ExplicitMdp mdp;
  mdp.num_states_ = num_states;
  mdp.num_actions_ = num_actions;
  mdp.terminal_ = terminal;
  mdp.next_ = std::move(next);
  mdp.reward_ = std::move(reward);
  mdp.labels_ = std::move(labels);

  // Iterative DFS; post-order gives successors before predecessors.
  enum Color : unsigned char { kWhite, kGrey, kBlack };
  std::vector<Color> color(num_states, kWhite);
  std::vector<StateId> parent(num_states, -1);
  mdp.order_.reserve(num_states);
  for (StateId root = 0; root < num_states; ++root) {
    if (root == terminal || color[root] != kWhite) continue;
    std::vector<std::pair<StateId, int>> stack{{root, 0}};
    color[root] = kGrey;
    while (!stack.empty()) {
      auto& [s, a] = stack.back();
      if (a == num_actions) {
        color[s] = kBlack;
        mdp.order_.push_back(s);
        stack.pop_back();
        continue;
      }
      StateId n = mdp.Next(s, a++);
      if (n == terminal) continue;
      if (color[n] == kGrey) {
        std::vector<StateId> cycle{n};
        for (StateId c = s; c != n && c != -1; c = parent[c]) cycle.push_back(c);
        std::reverse(cycle.begin() + 1, cycle.end());
        std::ostringstream msg;
        msg << "ExplicitMdp: non-episodic transition graph, cycle:";
        for (StateId c : cycle) msg << ' ' << mdp.Label(c);
        throw NonEpisodicError(msg.str(), std::move(cycle));
      }
      if (color[n] == kWhite) {
        color[n] = kGrey;
        parent[n] = s;
        stack.emplace_back(n, 0);
      }
    }
  }
  return mdp;
}

std::string ExplicitMdp::Label(StateId s) const {
  if (!labels_.empty()) return labels_[s];
  return s == terminal_ ? std::string("T") : std::to_string(s);
}

std::vector<Triple> ExplicitMdp::AllTransitions() const {
  std::vector<Triple> out;
  for (StateId s = 0; s < num_states_; ++s) {
    if (s == terminal_) continue;
    for (int a = 0; a < num_actions_; ++a) out.push_back({s, a, Next(s, a)});
  }
  return out;
}

QFunction::QFunction(int num_states, int num_actions, StateId terminal)
    : num_states_(num_states),
      num_actions_(num_actions),
      terminal_(terminal),
      values_(static_cast<std::size_t>(num_states) * num_actions, 0) {}

void QFunction::Set(StateId s, int a, int v) {
  if (s == terminal_ && v != 0) {
    throw std::invalid_argument("QFunction: terminal values are fixed at 0");
  }
  values_[static_cast<std::size_t>(s) * num_actions_ + a] = v;
}

int QFunction::MaxValue(StateId s) const {
  if (s == terminal_) return 0;
  int best = std::numeric_limits<int>::min();
  for (int a = 0; a < num_actions_; ++a) best = std::max(best, (*this)(s, a));
  return best;
}

std::string QFunction::Key() const {
  std::string key;
  key.reserve(values_.size() * 3);
  for (int v : values_) {
    key += std::to_string(v);
    key += ',';
  }
  return key;
}

QFunction SolveOptimalQ(const ExplicitMdp& mdp) {
  QFunction q(mdp.num_states(), mdp.num_actions(), mdp.terminal());
  for (StateId s : mdp.BackwardOrder()) {
    for (int a = 0; a < mdp.num_actions(); ++a) {
      q.Set(s, a, mdp.Reward(s, a) + q.MaxValue(mdp.Next(s, a)));
    }
  }
  return q;
}

bool BellmanConsistent(const QFunction& q, const RewardTable& reward,
                       std::span<const Triple> transitions) {
  for (const Triple& t : transitions) {
    if (t.state < 0 || t.state >= q.num_states() || t.next_state < 0 ||
        t.next_state >= q.num_states()) {
      throw std::out_of_range("BellmanConsistent: unknown state id");
    }
    if (t.action < 0 || t.action >= q.num_actions()) {
      throw std::out_of_range("BellmanConsistent: unknown action");
    }
    if (q(t.state, t.action) !=
        reward(t.state, t.action) + q.MaxValue(t.next_state)) {
      return false;
    }
  }
  return true;
}

std::vector<int> GreedyActions(const QFunction& q, StateId s) {
  const int best = q.MaxValue(s);
  std::vector<int> out;
  for (int a = 0; a < q.num_actions(); ++a) {
    if (q(s, a) == best) out.push_back(a);
  }
  return out;
}

ExplicitMdp ParseMdpText(std::istream& in) {
  std::map<std::string, StateId> ids;
  std::vector<std::string> names;
  auto id_of = [&](const std::string& name) {
    auto [it, inserted] = ids.emplace(name, static_cast<StateId>(names.size()));
    if (inserted) names.push_back(name);
    return it->second;
  };
  struct Row {
    StateId s;
    int a;
    StateId n;
    int r;
  };
  std::vector<Row> rows;
  std::string terminal_name;
  int num_actions = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "terminal") {
      if (!(ls >> terminal_name)) {
        throw std::invalid_argument("mdp text line " + std::to_string(line_no) +
                                    ": missing terminal state");
      }
      id_of(terminal_name);
      continue;
    }
    Row row{};
    std::string next_name;
    row.s = id_of(first);
    if (!(ls >> row.a >> next_name >> row.r) || row.a < 0) {
      throw std::invalid_argument("mdp text line " + std::to_string(line_no) +
                                  ": expected <state> <action> <next> <reward>");
    }
    row.n = id_of(next_name);
    num_actions = std::max(num_actions, row.a + 1);
    rows.push_back(row);
  }
  if (terminal_name.empty()) {
    throw std::invalid_argument("mdp text: no terminal declaration");
  }
  const int num_states = static_cast<int>(names.size());
  const StateId terminal = ids.at(terminal_name);
  const auto cells = static_cast<std::size_t>(num_states) * num_actions;
  std::vector<StateId> next(cells, -1);
  std::vector<int> reward(cells, 0);
  for (const Row& row : rows) {
    if (row.s == terminal) {
      throw std::invalid_argument("mdp text: transition out of terminal state");
    }
    auto idx = static_cast<std::size_t>(row.s) * num_actions + row.a;
    if (next[idx] != -1) {
      throw std::invalid_argument("mdp text: duplicate (state, action) " +
                                  names[row.s]);
    }
    next[idx] = row.n;
    reward[idx] = row.r;
  }
  for (StateId s = 0; s < num_states; ++s) {
    for (int a = 0; a < num_actions; ++a) {
      auto idx = static_cast<std::size_t>(s) * num_actions + a;
      if (s == terminal) {
        next[idx] = terminal;
      } else if (next[idx] == -1) {
        throw std::invalid_argument("mdp text: state " + names[s] +
                                    " lacks action " + std::to_string(a));
      }
    }
  }
  return ExplicitMdp::Create(num_states, num_actions, terminal, std::move(next),
                             RewardTable(num_states, num_actions, std::move(reward)),
                             std::move(names));
}

ExplicitMdp LoadMdpFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mdp file: " + path);
  return ParseMdpText(in);
}

}  // namespace mdp
}  // namespace mbgen
