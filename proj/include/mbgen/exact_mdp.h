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

// Exact representation and solution of small deterministic episodic MDPs.
// All returns are integers so that value functions can be compared exactly.

#ifndef MBGEN_EXACT_MDP_H_
#define MBGEN_EXACT_MDP_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mbgen {
namespace mdp {

using StateId = int;

// Reward table indexed by (state, action).
class RewardTable {
 public:
  RewardTable() = default;
  RewardTable(int num_states, int num_actions, std::vector<int> values);

  int operator()(StateId s, int a) const {
    return values_[static_cast<std::size_t>(s) * num_actions_ + a];
  }
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  const std::vector<int>& values() const { return values_; }

 private:
  int num_states_ = 0;
  int num_actions_ = 0;
  std::vector<int> values_;
};

// Thrown when some policy can cycle among nonterminal states forever.
class NonEpisodicError : public std::invalid_argument {
 public:
  NonEpisodicError(const std::string& what, std::vector<StateId> cycle)
      : std::invalid_argument(what), cycle_(std::move(cycle)) {}
  const std::vector<StateId>& cycle() const { return cycle_; }

 private:
  std::vector<StateId> cycle_;
};

struct Triple {
  StateId state;
  int action;
  StateId next_state;

  friend bool operator==(const Triple&, const Triple&) = default;
};

// Finite deterministic episodic MDP. States are 0..num_states-1 and one of
// them is the absorbing terminal state. Immutable after construction.
class ExplicitMdp {
 public:
  // Validates the tables and rejects non-episodic transition graphs.
  static ExplicitMdp Create(int num_states, int num_actions, StateId terminal,
                            std::vector<StateId> next, RewardTable reward,
                            std::vector<std::string> labels = {});

  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  StateId terminal() const { return terminal_; }
  bool IsTerminal(StateId s) const { return s == terminal_; }
  StateId Next(StateId s, int a) const {
    return next_[static_cast<std::size_t>(s) * num_actions_ + a];
  }
  int Reward(StateId s, int a) const { return reward_(s, a); }
  const RewardTable& reward() const { return reward_; }
  std::string Label(StateId s) const;

  // Nonterminal states ordered so that every successor appears earlier.
  const std::vector<StateId>& BackwardOrder() const { return order_; }

  // Every (s, a, p(s, a)) for nonterminal s.
  std::vector<Triple> AllTransitions() const;

 private:
  ExplicitMdp() = default;

  int num_states_ = 0;
  int num_actions_ = 0;
  StateId terminal_ = 0;
  std::vector<StateId> next_;
  RewardTable reward_;
  std::vector<std::string> labels_;
  std::vector<StateId> order_;
};

// Exact tabular action-value function. Terminal rows are identically zero.
class QFunction {
 public:
  QFunction() = default;
  QFunction(int num_states, int num_actions, StateId terminal);

  int operator()(StateId s, int a) const {
    return values_[static_cast<std::size_t>(s) * num_actions_ + a];
  }
  void Set(StateId s, int a, int v);
  int MaxValue(StateId s) const;

  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  StateId terminal() const { return terminal_; }
  const std::vector<int>& values() const { return values_; }

  // Canonical serialization used as a set key.
  std::string Key() const;

  friend bool operator==(const QFunction&, const QFunction&) = default;
  friend auto operator<=>(const QFunction&, const QFunction&) = default;

 private:
  int num_states_ = 0;
  int num_actions_ = 0;
  StateId terminal_ = 0;
  std::vector<int> values_;
};

// Backward induction over the acyclic nonterminal transition graph.
QFunction SolveOptimalQ(const ExplicitMdp& mdp);

// True iff q(s,a) == r(s,a) + max_a' q(s',a') for every listed transition.
// Throws std::out_of_range for state ids q does not know.
bool BellmanConsistent(const QFunction& q, const RewardTable& reward,
                       std::span<const Triple> transitions);

// Argmax set under exact comparison. Ties are all returned, ascending.
std::vector<int> GreedyActions(const QFunction& q, StateId s);

// Plain-text MDP description:
//   # comment
//   terminal <state>
//   <state> <action> <next_state> <reward>
// State names are arbitrary tokens; actions are 0-based integers. Every
// nonterminal state needs a line for each action.
ExplicitMdp ParseMdpText(std::istream& in);
ExplicitMdp LoadMdpFile(const std::string& path);

}  // namespace mdp
}  // namespace mbgen

#endif  // MBGEN_EXACT_MDP_H_
