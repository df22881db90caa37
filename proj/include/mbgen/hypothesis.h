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

// Hypothesis classes over optimal action-value functions.
//
// A family is a finite set of deterministic transition functions over a shared
// state space with a fixed reward. Given a dataset D of observed transitions:
//   H_Q     optimal Q of every member
//   H_B(D)  members of H_Q that satisfy the Bellman optimality equation on D
//   H_M(D)  optimal Q of the members whose dynamics agree with D
// H_M(D) is always a subset of H_B(D); the two coincide for tabular families
// and can differ when the family has factored structure.

#ifndef MBGEN_HYPOTHESIS_H_
#define MBGEN_HYPOTHESIS_H_

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "mbgen/exact_mdp.h"

namespace mbgen {
namespace hypothesis {

using mdp::StateId;

// Enumeration refuses families larger than this.
inline constexpr std::uint64_t kEnumerationGuard = std::uint64_t{1} << 24;

class EnumerationGuardError : public std::length_error {
 public:
  explicit EnumerationGuardError(const std::string& what_arg)
      : std::length_error(what_arg) {}
};

struct Dataset {
  std::vector<mdp::Triple> transitions;
};

// States are (counter, b_1..b_k) with counter in [0, countdown_max] and k free
// bits, plus one terminal state. The counter decrements every step and the
// episode ends on the step taken at counter 0.
class CountdownStateSpace {
 public:
  CountdownStateSpace(int countdown_max, int bit_count);

  int countdown_max() const { return countdown_max_; }
  int bit_count() const { return bit_count_; }
  int num_states() const { return (countdown_max_ + 1) * (1 << bit_count_) + 1; }
  StateId terminal() const { return num_states() - 1; }

  // bits[i] is component i+1 in the (counter, b_1, ..., b_k) notation.
  StateId Encode(int counter, unsigned mask) const {
    return counter * (1 << bit_count_) + static_cast<int>(mask);
  }
  StateId Encode(int counter, std::initializer_list<int> bits) const;
  int Counter(StateId s) const { return s >> bit_count_; }
  unsigned Mask(StateId s) const { return static_cast<unsigned>(s) & ((1u << bit_count_) - 1); }
  int Bit(StateId s, int i) const { return (Mask(s) >> i) & 1; }
  std::string Label(StateId s) const;
  std::vector<std::string> Labels() const;

 private:
  int countdown_max_;
  int bit_count_;
};

// Reward 1 for any action taken at counter 0 with every bit set, else 0.
// `action_overrides` replaces the reward of an action in every state.
mdp::RewardTable GoalReward(const CountdownStateSpace& space, int action_count,
                            const std::map<int, int>& action_overrides = {});

// A finite set of transition functions indexed 0..size()-1.
class TransitionFamily {
 public:
  TransitionFamily(CountdownStateSpace space, int action_count,
                   mdp::RewardTable reward);
  virtual ~TransitionFamily() = default;

  const CountdownStateSpace& space() const { return space_; }
  int num_states() const { return space_.num_states(); }
  int num_actions() const { return action_count_; }
  StateId terminal() const { return space_.terminal(); }
  const mdp::RewardTable& reward() const { return reward_; }

  // Number of members; throws EnumerationGuardError above the guard.
  virtual std::uint64_t size() const = 0;
  virtual StateId Next(std::uint64_t model, StateId s, int a) const = 0;
  virtual bool IsTabular() const { return false; }
  virtual std::string Describe() const = 0;

  // Throws std::invalid_argument unless some member produces every transition.
  virtual void ValidateDataset(const Dataset& data) const = 0;

  mdp::ExplicitMdp Materialize(std::uint64_t model) const;
  bool Agrees(std::uint64_t model, const Dataset& data) const;

 protected:
  void CheckStateIds(const Dataset& data) const;

 private:
  CountdownStateSpace space_;
  int action_count_;
  mdp::RewardTable reward_;
};

// Each free bit evolves as an arbitrary function of (its own value, action);
// no bit reads another. Actions listed in `fixed` have known dynamics.
class FactoredFamily final : public TransitionFamily {
 public:
  // fixed[a][i] = {next value of bit i when it is 0, when it is 1}.
  using FixedDynamics = std::map<int, std::vector<std::array<int, 2>>>;

  FactoredFamily(int countdown_max, int bit_count, int action_count,
                 mdp::RewardTable reward, FixedDynamics fixed = {});

  std::uint64_t size() const override;
  StateId Next(std::uint64_t model, StateId s, int a) const override;
  std::string Describe() const override;
  void ValidateDataset(const Dataset& data) const override;

  int free_action_count() const { return static_cast<int>(free_actions_.size()); }
  const FixedDynamics& fixed() const { return fixed_; }

  // Index of the member with the given per-bit tables, where
  // tables[i][a][b] is the next value of bit i under action a from value b.
  std::uint64_t IndexOf(
      const std::vector<std::vector<std::array<int, 2>>>& tables) const;

 private:
  int free_bits_per_component() const { return 2 * free_action_count(); }

  FixedDynamics fixed_;
  std::vector<int> free_actions_;
  std::vector<int> free_slot_;  // action -> position in free_actions_ or -1
};

// Every mapping from nonterminal (s, a) to a successor whose counter is one
// lower; counter-0 states always terminate. Keeps every member episodic.
class TabularFamily final : public TransitionFamily {
 public:
  TabularFamily(int countdown_max, int bit_count, int action_count,
                mdp::RewardTable reward);

  std::uint64_t size() const override;
  StateId Next(std::uint64_t model, StateId s, int a) const override;
  bool IsTabular() const override { return true; }
  std::string Describe() const override;
  void ValidateDataset(const Dataset& data) const override;

  // Number of (s, a) pairs whose successor is free.
  int free_pairs() const;

 private:
  int successors() const { return 1 << space().bit_count(); }
};

// Deduplicated by canonical serialization; ordered for reproducible output.
using QSet = std::map<std::string, mdp::QFunction>;

struct EnumerationOptions {
  int threads = 1;
};

// Streams every member of the family exactly once, in index order.
void EnumerateModels(
    const TransitionFamily& family,
    const std::function<void(std::uint64_t, const mdp::ExplicitMdp&)>& visit);

QSet ComputeHQ(const TransitionFamily& family, EnumerationOptions opts = {});
QSet ComputeHB(const TransitionFamily& family, const Dataset& data,
               EnumerationOptions opts = {});
QSet ComputeHM(const TransitionFamily& family, const Dataset& data,
               EnumerationOptions opts = {});

inline constexpr std::size_t kWitnessCap = 10;

struct HypothesisReport {
  std::string family;
  std::uint64_t family_size = 0;
  std::size_t dataset_size = 0;
  std::size_t hq_size = 0;
  std::size_t hb_size = 0;
  std::size_t hm_size = 0;
  std::size_t consistent_models = 0;
  bool subset_holds = false;
  bool strict = false;
  bool tabular = false;
  bool equal = false;
  QSet hm;         // full H_M(D)
  QSet witnesses;  // full H_B(D) \ H_M(D); serialized output is capped
};

// Computes all three classes in one pass. Throws std::logic_error if H_M is
// not contained in H_B, or if a tabular family yields H_M != H_B.
HypothesisReport VerifyTheorem(const TransitionFamily& family,
                               const Dataset& data,
                               EnumerationOptions opts = {});

bool IsWitness(const HypothesisReport& report, const mdp::QFunction& q);

// QFunctions are written as {state label: [value per action]}; member and
// witness lists are truncated to kWitnessCap while counts stay exact.
nlohmann::json QFunctionToJson(const mdp::QFunction& q,
                               const CountdownStateSpace& space);
nlohmann::json ReportToJson(const HypothesisReport& report,
                            const TransitionFamily& family);

// ---------------------------------------------------------------------------
// The worked instance: counter starting at 2, two free bits, actions
// {0, 1, 2}. Action 0 toggles bit 1, action 1 toggles bit 2, action 2 is a
// no-op; six transitions from counter-2 states pin that model down.

struct Instance {
  std::unique_ptr<TransitionFamily> family;
  Dataset data;
};

Instance BuildCounterexample();

// Adds action 3 with known dynamics (both bits set to 1) and reward -1, plus
// a three-step episode that reaches the rewarding transition.
Instance BuildExtendedExample();

// Tabular family with the goal reward.
std::unique_ptr<TabularFamily> BuildTabularFamily(int countdown_max,
                                                  int bit_count,
                                                  int action_count);

// The true toggle dynamics as a member index of the (extended) family.
// Throws std::invalid_argument unless `family` is a FactoredFamily with two
// free bits.
std::uint64_t ToggleModelIndex(const TransitionFamily& family);

// Value of 1 exactly at counter 0 with both bits set (and, in the extended
// family, -1 for action 3 unless the counter is 1); 0 elsewhere.
mdp::QFunction ReferenceWitness(const TransitionFamily& family);

// Random subset of one member's transitions; each included with prob 1/2.
Dataset SampleMemberDataset(const TransitionFamily& family,
                            std::uint64_t model, std::mt19937_64& rng);

// Family file: flat `key = value` lines.
//   countdown_max = 2
//   bit_count = 2
//   action_count = 3
//   tabular = false
//   action_reward = 3 -1            (repeatable)
//   fixed_action = 3 1,1 1,1        (per bit: next-if-0,next-if-1)
//   transition = 2,0,0 0 1,1,0      (state action next; next may be T)
Instance LoadFamilyFile(const std::string& path);

}  // namespace hypothesis
}  // namespace mbgen

#endif  // MBGEN_HYPOTHESIS_H_
