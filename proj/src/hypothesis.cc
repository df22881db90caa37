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

#include "mbgen/hypothesis.h"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <utility>

namespace mbgen {
namespace hypothesis {
namespace {

std::uint64_t GuardedSize(int free_bits, const std::string& what) {
  if (free_bits > 24) {
    throw EnumerationGuardError(what + ": 2^" + std::to_string(free_bits) +
                                " members exceeds the enumeration guard of 2^24");
  }
  return std::uint64_t{1} << free_bits;
}

struct PassResult {
  QSet hq;
  QSet hm;
  std::size_t consistent = 0;
};

// One enumeration pass collecting H_Q and, when `data` is given, H_M.
PassResult EnumeratePass(const TransitionFamily& family, const Dataset* data,
                         EnumerationOptions opts) {
  const std::uint64_t n = family.size();
  const int threads = std::max(1, opts.threads);
  auto work = [&](std::uint64_t lo, std::uint64_t hi, PassResult& out) {
    for (std::uint64_t m = lo; m < hi; ++m) {
      mdp::QFunction q = mdp::SolveOptimalQ(family.Materialize(m));
      std::string key = q.Key();
      if (data != nullptr && family.Agrees(m, *data)) {
        out.hm.emplace(key, q);
        ++out.consistent;
      }
      out.hq.emplace(std::move(key), std::move(q));
    }
  };
  if (threads == 1 || n < 1024) {
    PassResult out;
    work(0, n, out);
    return out;
  }
  std::vector<PassResult> parts(threads);
  {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) {
      std::uint64_t lo = n * t / threads, hi = n * (t + 1) / threads;
      pool.emplace_back(work, lo, hi, std::ref(parts[t]));
    }
  }
  PassResult merged = std::move(parts[0]);
  for (int t = 1; t < threads; ++t) {
    merged.hq.merge(parts[t].hq);
    merged.hm.merge(parts[t].hm);
    merged.consistent += parts[t].consistent;
  }
  return merged;
}

QSet FilterBellman(const QSet& hq, const TransitionFamily& family,
                   const Dataset& data) {
  QSet hb;
  for (const auto& [key, q] : hq) {
    if (mdp::BellmanConsistent(q, family.reward(), data.transitions)) {
      hb.emplace(key, q);
    }
  }
  return hb;
}

StateId ParseState(const CountdownStateSpace& space, const std::string& text) {
  if (text == "T" || text == "_|_") return space.terminal();
  std::vector<int> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(std::stoi(item));
  if (static_cast<int>(parts.size()) != space.bit_count() + 1) {
    throw std::invalid_argument("family file: bad state '" + text + "'");
  }
  unsigned mask = 0;
  for (int i = 0; i < space.bit_count(); ++i) {
    if (parts[i + 1] != 0 && parts[i + 1] != 1) {
      throw std::invalid_argument("family file: non-binary bit in '" + text + "'");
    }
    mask |= static_cast<unsigned>(parts[i + 1]) << i;
  }
  if (parts[0] < 0 || parts[0] > space.countdown_max()) {
    throw std::invalid_argument("family file: counter out of range in '" + text + "'");
  }
  return space.Encode(parts[0], mask);
}

std::string Trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

CountdownStateSpace::CountdownStateSpace(int countdown_max, int bit_count)
    : countdown_max_(countdown_max), bit_count_(bit_count) {
  if (countdown_max < 0 || bit_count < 1 || bit_count > 16) {
    throw std::invalid_argument("CountdownStateSpace: bad dimensions");
  }
}

StateId CountdownStateSpace::Encode(int counter,
                                    std::initializer_list<int> bits) const {
  if (static_cast<int>(bits.size()) != bit_count_) {
    throw std::invalid_argument("CountdownStateSpace::Encode: bit count");
  }
  unsigned mask = 0;
  int i = 0;
  for (int b : bits) mask |= static_cast<unsigned>(b != 0) << i++;
  return Encode(counter, mask);
}

std::string CountdownStateSpace::Label(StateId s) const {
  if (s == terminal()) return "T";
  std::string out = "(" + std::to_string(Counter(s));
  for (int i = 0; i < bit_count_; ++i) out += "," + std::to_string(Bit(s, i));
  return out + ")";
}

std::vector<std::string> CountdownStateSpace::Labels() const {
  std::vector<std::string> out;
  for (StateId s = 0; s < num_states(); ++s) out.push_back(Label(s));
  return out;
}

mdp::RewardTable GoalReward(const CountdownStateSpace& space, int action_count,
                            const std::map<int, int>& action_overrides) {
  const unsigned all = (1u << space.bit_count()) - 1;
  std::vector<int> values(static_cast<std::size_t>(space.num_states()) * action_count, 0);
  for (StateId s = 0; s < space.terminal(); ++s) {
    for (int a = 0; a < action_count; ++a) {
      int r = (space.Counter(s) == 0 && space.Mask(s) == all) ? 1 : 0;
      if (auto it = action_overrides.find(a); it != action_overrides.end()) {
        r = it->second;
      }
      values[static_cast<std::size_t>(s) * action_count + a] = r;
    }
  }
  return mdp::RewardTable(space.num_states(), action_count, std::move(values));
}

TransitionFamily::TransitionFamily(CountdownStateSpace space, int action_count,
                                   mdp::RewardTable reward)
    : space_(space), action_count_(action_count), reward_(std::move(reward)) {
  if (action_count < 1) throw std::invalid_argument("family: no actions");
  if (reward_.num_states() != space_.num_states() ||
      reward_.num_actions() != action_count) {
    throw std::invalid_argument("family: reward table shape mismatch");
  }
}

mdp::ExplicitMdp TransitionFamily::Materialize(std::uint64_t model) const {
  const int n = num_states();
  const int na = num_actions();
  std::vector<StateId> next(static_cast<std::size_t>(n) * na, terminal());
  for (StateId s = 0; s < terminal(); ++s) {
    for (int a = 0; a < na; ++a) {
      next[static_cast<std::size_t>(s) * na + a] = Next(model, s, a);
    }
  }
  return mdp::ExplicitMdp::Create(n, na, terminal(), std::move(next), reward_);
}

bool TransitionFamily::Agrees(std::uint64_t model, const Dataset& data) const {
  for (const auto& t : data.transitions) {
    if (Next(model, t.state, t.action) != t.next_state) return false;
  }
  return true;
}

void TransitionFamily::CheckStateIds(const Dataset& data) const {
  for (const auto& t : data.transitions) {
    if (t.state < 0 || t.state >= terminal() || t.next_state < 0 ||
        t.next_state > terminal()) {
      throw std::invalid_argument("dataset references an unknown or terminal state");
    }
    if (t.action < 0 || t.action >= num_actions()) {
      throw std::invalid_argument("dataset references an unknown action");
    }
    const int c = space_.Counter(t.state);
    if (c == 0 ? t.next_state != terminal()
               : (t.next_state == terminal() ||
                  space_.Counter(t.next_state) != c - 1)) {
      throw std::invalid_argument("dataset transition " + space_.Label(t.state) +
                                  " -> " + space_.Label(t.next_state) +
                                  " breaks the countdown");
    }
  }
}

FactoredFamily::FactoredFamily(int countdown_max, int bit_count,
                               int action_count, mdp::RewardTable reward,
                               FixedDynamics fixed)
    : TransitionFamily(CountdownStateSpace(countdown_max, bit_count),
                       action_count, std::move(reward)),
      fixed_(std::move(fixed)),
      free_slot_(action_count, -1) {
  for (const auto& [a, rules] : fixed_) {
    if (a < 0 || a >= action_count || static_cast<int>(rules.size()) != bit_count) {
      throw std::invalid_argument("FactoredFamily: bad fixed dynamics");
    }
  }
  for (int a = 0; a < action_count; ++a) {
    if (!fixed_.contains(a)) {
      free_slot_[a] = static_cast<int>(free_actions_.size());
      free_actions_.push_back(a);
    }
  }
}

std::uint64_t FactoredFamily::size() const {
  return GuardedSize(space().bit_count() * free_bits_per_component(), Describe());
}

StateId FactoredFamily::Next(std::uint64_t model, StateId s, int a) const {
  const auto& sp = space();
  const int c = sp.Counter(s);
  if (s == terminal() || c == 0) return terminal();
  unsigned mask = 0;
  const int slot = free_slot_[a];
  for (int i = 0; i < sp.bit_count(); ++i) {
    const int b = sp.Bit(s, i);
    int nb;
    if (slot < 0) {
      nb = fixed_.at(a)[i][b];
    } else {
      const int idx = i * free_bits_per_component() + 2 * slot + b;
      nb = static_cast<int>((model >> idx) & 1u);
    }
    mask |= static_cast<unsigned>(nb) << i;
  }
  return sp.Encode(c - 1, mask);
}

std::uint64_t FactoredFamily::IndexOf(
    const std::vector<std::vector<std::array<int, 2>>>& tables) const {
  std::uint64_t index = 0;
  for (int i = 0; i < space().bit_count(); ++i) {
    for (int a : free_actions_) {
      for (int b = 0; b < 2; ++b) {
        if (tables.at(i).at(a)[b] != 0) {
          index |= std::uint64_t{1} << (i * free_bits_per_component() +
                                        2 * free_slot_[a] + b);
        }
      }
    }
  }
  return index;
}

std::string FactoredFamily::Describe() const {
  std::ostringstream os;
  os << "factored(countdown_max=" << space().countdown_max()
     << ", bits=" << space().bit_count() << ", actions=" << num_actions()
     << ", fixed_actions=" << fixed_.size() << ")";
  return os.str();
}

void FactoredFamily::ValidateDataset(const Dataset& data) const {
  CheckStateIds(data);
  const auto& sp = space();
  // (bit, action, value) -> observed next value
  std::map<std::tuple<int, int, int>, int> seen;
  for (const auto& t : data.transitions) {
    if (sp.Counter(t.state) == 0) continue;
    for (int i = 0; i < sp.bit_count(); ++i) {
      const int b = sp.Bit(t.state, i);
      const int nb = sp.Bit(t.next_state, i);
      if (auto it = fixed_.find(t.action); it != fixed_.end()) {
        if (it->second[i][b] != nb) {
          throw std::invalid_argument("dataset contradicts the fixed dynamics of action " +
                                      std::to_string(t.action));
        }
        continue;
      }
      auto [it, inserted] = seen.emplace(std::make_tuple(i, t.action, b), nb);
      if (!inserted && it->second != nb) {
        throw std::invalid_argument(
            "dataset is inconsistent with factored dynamics at bit " +
            std::to_string(i + 1) + ", action " + std::to_string(t.action));
      }
    }
  }
}

TabularFamily::TabularFamily(int countdown_max, int bit_count,
                             int action_count, mdp::RewardTable reward)
    : TransitionFamily(CountdownStateSpace(countdown_max, bit_count),
                       action_count, std::move(reward)) {}

int TabularFamily::free_pairs() const {
  return space().countdown_max() * (1 << space().bit_count()) * num_actions();
}

std::uint64_t TabularFamily::size() const {
  return GuardedSize(free_pairs() * space().bit_count(), Describe());
}

StateId TabularFamily::Next(std::uint64_t model, StateId s, int a) const {
  const auto& sp = space();
  const int c = sp.Counter(s);
  if (s == terminal() || c == 0) return terminal();
  const int pair = (s - (1 << sp.bit_count())) * num_actions() + a;
  const auto digit = static_cast<unsigned>(
      (model >> (pair * sp.bit_count())) & static_cast<unsigned>(successors() - 1));
  return sp.Encode(c - 1, digit);
}

std::string TabularFamily::Describe() const {
  std::ostringstream os;
  os << "tabular(countdown_max=" << space().countdown_max()
     << ", bits=" << space().bit_count() << ", actions=" << num_actions() << ")";
  return os.str();
}

void TabularFamily::ValidateDataset(const Dataset& data) const {
  CheckStateIds(data);
  std::map<std::pair<StateId, int>, StateId> seen;
  for (const auto& t : data.transitions) {
    auto [it, inserted] = seen.emplace(std::make_pair(t.state, t.action), t.next_state);
    if (!inserted && it->second != t.next_state) {
      throw std::invalid_argument("dataset maps one (state, action) to two successors");
    }
  }
}

void EnumerateModels(
    const TransitionFamily& family,
    const std::function<void(std::uint64_t, const mdp::ExplicitMdp&)>& visit) {
  const std::uint64_t n = family.size();
  for (std::uint64_t m = 0; m < n; ++m) visit(m, family.Materialize(m));
}

QSet ComputeHQ(const TransitionFamily& family, EnumerationOptions opts) {
  return EnumeratePass(family, nullptr, opts).hq;
}

QSet ComputeHB(const TransitionFamily& family, const Dataset& data,
               EnumerationOptions opts) {
  family.ValidateDataset(data);
  return FilterBellman(ComputeHQ(family, opts), family, data);
}

QSet ComputeHM(const TransitionFamily& family, const Dataset& data,
               EnumerationOptions opts) {
  family.ValidateDataset(data);
  PassResult pass = EnumeratePass(family, &data, opts);
  if (pass.consistent == 0) {
    std::cerr << "warning: no member of " << family.Describe()
              << " is consistent with the dataset\n";
  }
  return std::move(pass.hm);
}

HypothesisReport VerifyTheorem(const TransitionFamily& family,
                               const Dataset& data, EnumerationOptions opts) {
  family.ValidateDataset(data);
  PassResult pass = EnumeratePass(family, &data, opts);
  QSet hb = FilterBellman(pass.hq, family, data);

  HypothesisReport report;
  report.family = family.Describe();
  report.family_size = family.size();
  report.dataset_size = data.transitions.size();
  report.hq_size = pass.hq.size();
  report.hb_size = hb.size();
  report.hm_size = pass.hm.size();
  report.consistent_models = pass.consistent;
  report.tabular = family.IsTabular();
  report.subset_holds = std::all_of(pass.hm.begin(), pass.hm.end(),
                                    [&](const auto& kv) { return hb.contains(kv.first); });
  for (auto& [key, q] : hb) {
    if (!pass.hm.contains(key)) report.witnesses.emplace(key, q);
  }
  report.strict = report.subset_holds && !report.witnesses.empty();
  report.equal = report.subset_holds && report.witnesses.empty();
  report.hm = std::move(pass.hm);

  if (!report.subset_holds) {
    throw std::logic_error("H_M(D) is not contained in H_B(D) for " + report.family);
  }
  if (report.tabular && !report.equal) {
    throw std::logic_error("tabular family yields H_M(D) != H_B(D) for " + report.family);
  }
  return report;
}

bool IsWitness(const HypothesisReport& report, const mdp::QFunction& q) {
  return report.witnesses.contains(q.Key());
}

nlohmann::json QFunctionToJson(const mdp::QFunction& q,
                               const CountdownStateSpace& space) {
  nlohmann::json out = nlohmann::json::object();
  for (StateId s = 0; s < q.num_states(); ++s) {
    if (s == q.terminal()) continue;
    std::vector<int> row;
    for (int a = 0; a < q.num_actions(); ++a) row.push_back(q(s, a));
    out[space.Label(s)] = row;
  }
  return out;
}

nlohmann::json ReportToJson(const HypothesisReport& report,
                            const TransitionFamily& family) {
  auto capped = [&](const QSet& set) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [key, q] : set) {
      if (arr.size() >= kWitnessCap) break;
      arr.push_back(QFunctionToJson(q, family.space()));
    }
    return arr;
  };
  return {
      {"family", report.family},
      {"family_size", report.family_size},
      {"dataset_size", report.dataset_size},
      {"H_Q", report.hq_size},
      {"H_B", report.hb_size},
      {"H_M", report.hm_size},
      {"consistent_models", report.consistent_models},
      {"subset_holds", report.subset_holds},
      {"strict", report.strict},
      {"tabular", report.tabular},
      {"equal", report.equal},
      {"H_M_members", capped(report.hm)},
      {"witness_count", report.witnesses.size()},
      {"witnesses", capped(report.witnesses)},
  };
}

Instance BuildCounterexample() {
  CountdownStateSpace space(2, 2);
  auto family = std::make_unique<FactoredFamily>(2, 2, 3, GoalReward(space, 3));
  auto s = [&](int c, int b1, int b2) { return space.Encode(c, {b1, b2}); };
  Dataset data{{
      {s(2, 0, 0), 0, s(1, 1, 0)},
      {s(2, 1, 1), 0, s(1, 0, 1)},
      {s(2, 0, 0), 1, s(1, 0, 1)},
      {s(2, 1, 1), 1, s(1, 1, 0)},
      {s(2, 0, 0), 2, s(1, 0, 0)},
      {s(2, 1, 1), 2, s(1, 1, 1)},
  }};
  family->ValidateDataset(data);
  return {std::move(family), std::move(data)};
}

Instance BuildExtendedExample() {
  CountdownStateSpace space(2, 2);
  FactoredFamily::FixedDynamics fixed{{3, {{1, 1}, {1, 1}}}};
  auto family = std::make_unique<FactoredFamily>(
      2, 2, 4, GoalReward(space, 4, {{3, -1}}), std::move(fixed));
  Instance base = BuildCounterexample();
  Dataset data = base.data;
  auto s = [&](int c, int b1, int b2) { return space.Encode(c, {b1, b2}); };
  data.transitions.push_back({s(2, 0, 0), 2, s(1, 0, 0)});
  data.transitions.push_back({s(1, 0, 0), 3, s(0, 1, 1)});
  data.transitions.push_back({s(0, 1, 1), 2, space.terminal()});
  family->ValidateDataset(data);
  return {std::move(family), std::move(data)};
}

std::unique_ptr<TabularFamily> BuildTabularFamily(int countdown_max,
                                                  int bit_count,
                                                  int action_count) {
  CountdownStateSpace space(countdown_max, bit_count);
  return std::make_unique<TabularFamily>(countdown_max, bit_count, action_count,
                                         GoalReward(space, action_count));
}

std::uint64_t ToggleModelIndex(const TransitionFamily& family) {
  const auto* factored = dynamic_cast<const FactoredFamily*>(&family);
  if (factored == nullptr || family.space().bit_count() != 2 ||
      family.num_actions() < 3) {
    throw std::invalid_argument("ToggleModelIndex: needs the two-bit factored family");
  }
  std::vector<std::vector<std::array<int, 2>>> tables(
      2, std::vector<std::array<int, 2>>(family.num_actions(), {0, 1}));
  tables[0][0] = {1, 0};  // action 0 toggles bit 1
  tables[1][1] = {1, 0};  // action 1 toggles bit 2
  return factored->IndexOf(tables);
}

mdp::QFunction ReferenceWitness(const TransitionFamily& family) {
  const auto* factored = dynamic_cast<const FactoredFamily*>(&family);
  if (factored == nullptr) {
    throw std::invalid_argument("ReferenceWitness: needs a factored family");
  }
  const auto& sp = family.space();
  const unsigned all = (1u << sp.bit_count()) - 1;
  const bool extended = factored->fixed().contains(3);
  mdp::QFunction q(family.num_states(), family.num_actions(), family.terminal());
  for (StateId s = 0; s < family.terminal(); ++s) {
    for (int a = 0; a < family.num_actions(); ++a) {
      int v = 0;
      if (extended && a == 3) {
        v = sp.Counter(s) != 1 ? -1 : 0;
      } else if (sp.Counter(s) == 0 && sp.Mask(s) == all) {
        v = 1;
      }
      q.Set(s, a, v);
    }
  }
  return q;
}

Dataset SampleMemberDataset(const TransitionFamily& family, std::uint64_t model,
                            std::mt19937_64& rng) {
  Dataset data;
  std::bernoulli_distribution keep(0.5);
  for (StateId s = 0; s < family.terminal(); ++s) {
    for (int a = 0; a < family.num_actions(); ++a) {
      if (keep(rng)) data.transitions.push_back({s, a, family.Next(model, s, a)});
    }
  }
  return data;
}

Instance LoadFamilyFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open family file: " + path);
  int countdown_max = -1, bit_count = -1, action_count = -1;
  bool tabular = false;
  std::map<int, int> action_reward;
  FactoredFamily::FixedDynamics fixed;
  std::vector<std::string> transition_lines;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (Trim(line).empty()) continue;
    if (eq == std::string::npos) {
      throw std::invalid_argument("family file: expected key = value: " + line);
    }
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    std::istringstream vs(value);
    if (key == "countdown_max") {
      countdown_max = std::stoi(value);
    } else if (key == "bit_count") {
      bit_count = std::stoi(value);
    } else if (key == "action_count") {
      action_count = std::stoi(value);
    } else if (key == "tabular") {
      tabular = (value == "true" || value == "1");
    } else if (key == "action_reward") {
      int a, r;
      if (!(vs >> a >> r)) throw std::invalid_argument("family file: action_reward");
      action_reward[a] = r;
    } else if (key == "fixed_action") {
      int a;
      vs >> a;
      std::string rule;
      std::vector<std::array<int, 2>> rules;
      while (vs >> rule) {
        auto comma = rule.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("family file: fixed_action");
        rules.push_back({std::stoi(rule.substr(0, comma)), std::stoi(rule.substr(comma + 1))});
      }
      fixed[a] = std::move(rules);
    } else if (key == "transition") {
      transition_lines.push_back(value);
    } else {
      throw std::invalid_argument("family file: unknown key " + key);
    }
  }
  if (countdown_max < 0 || bit_count < 1 || action_count < 1) {
    throw std::invalid_argument("family file: countdown_max, bit_count and action_count are required");
  }
  CountdownStateSpace space(countdown_max, bit_count);
  auto reward = GoalReward(space, action_count, action_reward);
  Instance inst;
  if (tabular) {
    if (!fixed.empty()) throw std::invalid_argument("family file: tabular families have no fixed actions");
    inst.family = std::make_unique<TabularFamily>(countdown_max, bit_count, action_count, reward);
  } else {
    inst.family = std::make_unique<FactoredFamily>(countdown_max, bit_count, action_count,
                                                   reward, std::move(fixed));
  }
  for (const auto& tl : transition_lines) {
    std::istringstream ts(tl);
    std::string s, ns;
    int a;
    if (!(ts >> s >> a >> ns)) throw std::invalid_argument("family file: transition '" + tl + "'");
    inst.data.transitions.push_back({ParseState(space, s), a, ParseState(space, ns)});
  }
  inst.family->ValidateDataset(inst.data);
  return inst;
}

}  // namespace hypothesis
}  // namespace mbgen
