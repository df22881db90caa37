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
#include <numeric>
#include <random>
#include <sstream>

#include "gtest/gtest.h"

namespace mbgen {
namespace mdp {
namespace {

// Toggle model over (counter, b1, b2), written out by hand: id = 4c + b1 +
// 2*b2, terminal id 12. Action 0 flips b1, action 1 flips b2, action 2 keeps.
constexpr int kTerminal = 12;
int Id(int c, int b1, int b2) { return 4 * c + b1 + 2 * b2; }

ExplicitMdp ToggleMdp() {
  std::vector<StateId> next(13 * 3, kTerminal);
  std::vector<int> reward(13 * 3, 0);
  for (int c = 0; c <= 2; ++c) {
    for (int b1 = 0; b1 < 2; ++b1) {
      for (int b2 = 0; b2 < 2; ++b2) {
        const int s = Id(c, b1, b2);
        for (int a = 0; a < 3; ++a) {
          if (c > 0) {
            next[s * 3 + a] = Id(c - 1, a == 0 ? 1 - b1 : b1, a == 1 ? 1 - b2 : b2);
          }
          reward[s * 3 + a] = (c == 0 && b1 == 1 && b2 == 1) ? 1 : 0;
        }
      }
    }
  }
  return ExplicitMdp::Create(13, 3, kTerminal, next, RewardTable(13, 3, reward));
}

// Random episodic MDP: successors always have a smaller rank, ids shuffled.
ExplicitMdp RandomEpisodicMdp(std::mt19937_64& rng, int n, int actions) {
  std::vector<int> rank_to_id(n);
  std::iota(rank_to_id.begin(), rank_to_id.end(), 0);
  std::shuffle(rank_to_id.begin(), rank_to_id.end(), rng);
  const StateId terminal = rank_to_id[0];
  std::vector<StateId> next(n * actions, terminal);
  std::vector<int> reward(n * actions, 0);
  std::uniform_int_distribution<int> r(-3, 3);
  for (int rank = 1; rank < n; ++rank) {
    const StateId s = rank_to_id[rank];
    std::uniform_int_distribution<int> succ(0, rank - 1);
    for (int a = 0; a < actions; ++a) {
      next[s * actions + a] = rank_to_id[succ(rng)];
      reward[s * actions + a] = r(rng);
    }
  }
  return ExplicitMdp::Create(n, actions, terminal, next, RewardTable(n, actions, reward));
}

TEST(SolveOptimalQTest, ToggleModelHandValues) {
  QFunction q = SolveOptimalQ(ToggleMdp());
  // Toggle b1 now, b2 next, then collect at counter 0.
  EXPECT_EQ(q(Id(2, 0, 0), 0), 1);
  EXPECT_EQ(q(Id(2, 0, 0), 1), 1);
  // Only one toggle remains after a no-op.
  EXPECT_EQ(q(Id(2, 0, 0), 2), 0);
  EXPECT_EQ(q(Id(1, 1, 0), 1), 1);
  EXPECT_EQ(q(Id(1, 0, 0), 0), 0);
  for (int a = 0; a < 3; ++a) {
    EXPECT_EQ(q(Id(0, 1, 1), a), 1);
    EXPECT_EQ(q(kTerminal, a), 0);
  }
}

TEST(SolveOptimalQTest, OneStepToTerminalEqualsReward) {
  ExplicitMdp mdp = ToggleMdp();
  QFunction q = SolveOptimalQ(mdp);
  for (int b1 = 0; b1 < 2; ++b1) {
    for (int b2 = 0; b2 < 2; ++b2) {
      for (int a = 0; a < 3; ++a) {
        EXPECT_EQ(q(Id(0, b1, b2), a), mdp.Reward(Id(0, b1, b2), a));
      }
    }
  }
}

TEST(SolveOptimalQTest, RejectsCycleAndReportsIt) {
  // 0 -> 1 -> 2 -> 0 under action 0; 3 is terminal.
  std::vector<StateId> next = {1, 3, 2, 3, 0, 3, 3, 3};
  try {
    ExplicitMdp::Create(4, 2, 3, next, RewardTable(4, 2, std::vector<int>(8, 0)));
    FAIL() << "expected NonEpisodicError";
  } catch (const NonEpisodicError& e) {
    auto cycle = e.cycle();
    ASSERT_EQ(cycle.size(), 3u);
    std::sort(cycle.begin(), cycle.end());
    EXPECT_EQ(cycle, (std::vector<StateId>{0, 1, 2}));
  }
}

TEST(SolveOptimalQTest, RejectsSelfLoop) {
  std::vector<StateId> next = {0, 1};
  EXPECT_THROW(ExplicitMdp::Create(2, 1, 1, next, RewardTable(2, 1, {0, 0})),
               NonEpisodicError);
}

TEST(SolveOptimalQTest, SelfConsistentOnRandomMdps) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    ExplicitMdp mdp = RandomEpisodicMdp(rng, 2 + trial % 15, 1 + trial % 4);
    QFunction q = SolveOptimalQ(mdp);
    auto all = mdp.AllTransitions();
    EXPECT_TRUE(BellmanConsistent(q, mdp.reward(), all)) << "trial " << trial;
  }
}

TEST(SolveOptimalQTest, UnreachableRewardsDoNotLeak) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    ExplicitMdp mdp = RandomEpisodicMdp(rng, 10, 3);
    // Reachable set from the first nonterminal state.
    StateId root = mdp.terminal() == 0 ? 1 : 0;
    std::vector<bool> reach(mdp.num_states(), false);
    std::vector<StateId> stack{root};
    reach[root] = true;
    while (!stack.empty()) {
      StateId s = stack.back();
      stack.pop_back();
      if (mdp.IsTerminal(s)) continue;
      for (int a = 0; a < 3; ++a) {
        StateId n = mdp.Next(s, a);
        if (!reach[n]) {
          reach[n] = true;
          stack.push_back(n);
        }
      }
    }
    std::vector<int> reward = mdp.reward().values();
    for (StateId s = 0; s < mdp.num_states(); ++s) {
      if (!reach[s]) {
        for (int a = 0; a < 3; ++a) reward[s * 3 + a] += 17;
      }
    }
    std::vector<StateId> next(mdp.num_states() * 3);
    for (StateId s = 0; s < mdp.num_states(); ++s) {
      for (int a = 0; a < 3; ++a) next[s * 3 + a] = mdp.IsTerminal(s) ? s : mdp.Next(s, a);
    }
    ExplicitMdp altered = ExplicitMdp::Create(mdp.num_states(), 3, mdp.terminal(), next,
                                              RewardTable(mdp.num_states(), 3, reward));
    QFunction q1 = SolveOptimalQ(mdp), q2 = SolveOptimalQ(altered);
    for (StateId s = 0; s < mdp.num_states(); ++s) {
      if (!reach[s]) continue;
      for (int a = 0; a < 3; ++a) EXPECT_EQ(q1(s, a), q2(s, a));
    }
  }
}

TEST(SolveOptimalQTest, Deterministic) {
  std::mt19937_64 rng(3);
  ExplicitMdp mdp = RandomEpisodicMdp(rng, 12, 3);
  EXPECT_EQ(SolveOptimalQ(mdp), SolveOptimalQ(mdp));
  EXPECT_EQ(SolveOptimalQ(mdp).Key(), SolveOptimalQ(mdp).Key());
}

TEST(BellmanConsistentTest, ZeroQFailsRewardingTerminalStep) {
  QFunction zero(2, 1, 1);
  RewardTable reward(2, 1, {1, 0});
  std::vector<Triple> data = {{0, 0, 1}};
  EXPECT_FALSE(BellmanConsistent(zero, reward, data));
}

TEST(BellmanConsistentTest, UnknownStateRejected) {
  QFunction zero(2, 1, 1);
  RewardTable reward(2, 1, {0, 0});
  std::vector<Triple> data = {{5, 0, 1}};
  EXPECT_THROW(BellmanConsistent(zero, reward, data), std::out_of_range);
}

TEST(GreedyActionsTest, TiesAreReturnedAsASet) {
  QFunction uniform(3, 4, 2);
  EXPECT_EQ(GreedyActions(uniform, 0), (std::vector<int>{0, 1, 2, 3}));
  QFunction q = SolveOptimalQ(ToggleMdp());
  EXPECT_EQ(GreedyActions(q, Id(2, 0, 0)), (std::vector<int>{0, 1}));
  EXPECT_EQ(GreedyActions(q, Id(1, 1, 0)), (std::vector<int>{1}));
}

TEST(QFunctionTest, TerminalRowIsPinnedToZero) {
  QFunction q(3, 2, 2);
  EXPECT_THROW(q.Set(2, 0, 1), std::invalid_argument);
  EXPECT_EQ(q.MaxValue(2), 0);
}

TEST(ParseMdpTextTest, RoundTripsASmallChain) {
  std::istringstream in(R"(# two-step chain
start 0 mid 0
start 1 end -1
mid 0 end 1
mid 1 end 0
terminal end
)");
  ExplicitMdp mdp = ParseMdpText(in);
  EXPECT_EQ(mdp.num_states(), 3);
  EXPECT_EQ(mdp.num_actions(), 2);
  QFunction q = SolveOptimalQ(mdp);
  EXPECT_EQ(q(0, 0), 1);
  EXPECT_EQ(q(0, 1), -1);
  EXPECT_EQ(mdp.Label(0), "start");
}

TEST(ParseMdpTextTest, MissingActionIsAnError) {
  std::istringstream in("terminal T\na 0 T 1\na 1 T 0\nb 0 T 0\n");
  EXPECT_THROW(ParseMdpText(in), std::invalid_argument);
}

TEST(ParseMdpTextTest, CyclicTextIsRejected) {
  std::istringstream in("terminal T\na 0 b 0\nb 0 a 0\n");
  EXPECT_THROW(ParseMdpText(in), NonEpisodicError);
}

}  // namespace
}  // namespace mdp
}  // namespace mbgen
