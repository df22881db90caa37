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

#include "mbgen/env/illustrative_maze.h"

#include <algorithm>
#include <queue>
#include <sstream>

#include "mbgen/exact_mdp.h"

namespace mbgen {
namespace env {
std::vector<int> ReachDistance(const MazeLayout& layout) {
  std::vector<int> dist(kMazeCells, -1);
  std::queue<int> frontier;
  dist[kMazeGoal] = 0;
  frontier.push(kMazeGoal);
  while (!frontier.empty()) {
    int c = frontier.front();
    frontier.pop();
    for (int a = kUp; a <= kRight; ++a) {
      int m = GridMove(kMazeSide, c, a);
      if (m != c && !layout.wall[m] && dist[m] < 0) {
        dist[m] = dist[c] + 1;
        frontier.push(m);
      }
    }
  }
  return dist;
}

namespace {

void CheckReachable(const MazeLayout& layout) {
  if (layout.wall[kMazeGoal]) throw std::invalid_argument("maze layout: wall on the goal");
  std::vector<int> dist = ReachDistance(layout);
  for (int c = 0; c < kMazeCells; ++c) {
    if (!layout.wall[c] && dist[c] < 0) {
      throw std::invalid_argument("maze layout " + layout.ToString() +
                                  ": cell " + std::to_string(c) + " cannot reach the goal");
    }
  }
}

}  // namespace

MazeLayout MazeLayout::FromWalls(std::initializer_list<std::array<int, 2>> row_cols) {
  MazeLayout layout;
  for (auto [r, c] : row_cols) {
    if (r < 0 || r >= kMazeSide || c < 0 || c >= kMazeSide) {
      throw std::out_of_range("maze layout: wall outside the grid");
    }
    layout.wall[MazeCell(r, c)] = 1;
  }
  return layout;
}

std::vector<int> MazeLayout::WallCells() const {
  std::vector<int> cells;
  for (int c = 0; c < kMazeCells; ++c) {
    if (wall[c]) cells.push_back(c);
  }
  return cells;
}

std::string MazeLayout::ToString() const {
  std::string out;
  for (int c : WallCells()) {
    if (!out.empty()) out += ';';
    out += std::to_string(c / kMazeSide) + "," + std::to_string(c % kMazeSide);
  }
  return out;
}

MazeLayout LowerEvaluationLayout() { return MazeLayout::FromWalls({{1, 0}, {1, 1}}); }
MazeLayout UpperEvaluationLayout() { return MazeLayout::FromWalls({{0, 1}, {1, 1}}); }

MazeLayout ParseMazeLayout(const std::string& text) {
  if (text == "lower") return LowerEvaluationLayout();
  if (text == "upper") return UpperEvaluationLayout();
  MazeLayout layout;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ';')) {
    int r = -1, c = -1;
    char comma = 0;
    std::istringstream pair(item);
    if (!(pair >> r >> comma >> c) || comma != ',' || r < 0 || r >= kMazeSide || c < 0 ||
        c >= kMazeSide) {
      throw std::invalid_argument("maze layout: cannot parse '" + text + "'");
    }
    layout.wall[MazeCell(r, c)] = 1;
  }
  return layout;
}

std::vector<MazeLayout> SingleWallLayouts() {
  std::vector<MazeLayout> layouts;
  for (int c = 0; c < kMazeCells; ++c) {
    if (c == kMazeGoal) continue;
    MazeLayout layout;
    layout.wall[c] = 1;
    layouts.push_back(layout);
  }
  return layouts;
}

BitObservation MazeObservation(const MazeLayout& layout, int agent_cell) {
  BitObservation obs(4 * kMazeCells);
  obs.Set(agent_cell, true);
  obs.Set(kMazeCells + kMazeGoal, true);
  for (int c = 0; c < kMazeCells; ++c) {
    obs.Set(2 * kMazeCells + c, layout.wall[c]);
    obs.Set(3 * kMazeCells + c, !layout.wall[c]);
  }
  return obs;
}

std::pair<MazeLayout, int> DecodeMazeObservation(const BitObservation& obs) {
  if (obs.size() != 4 * kMazeCells || obs.Count(0, kMazeCells) != 1 ||
      obs.Count(kMazeCells, 2 * kMazeCells) != 1 || !obs[kMazeCells + kMazeGoal]) {
    throw UndecodableObservation("maze: malformed observation " + obs.ToString());
  }
  MazeLayout layout;
  int agent = 0;
  for (int c = 0; c < kMazeCells; ++c) {
    if (obs[2 * kMazeCells + c] == obs[3 * kMazeCells + c]) {
      throw UndecodableObservation("maze: wall vectors are not complementary");
    }
    layout.wall[c] = obs[2 * kMazeCells + c];
    if (obs[c]) agent = c;
  }
  if (layout.wall[agent]) throw UndecodableObservation("maze: agent inside a wall");
  return {layout, agent};
}

int MazeNext(const MazeLayout& layout, int cell, int action) {
  int m = GridMove(kMazeSide, cell, action);
  return layout.wall[m] ? cell : m;
}

std::vector<Transition> EnumerateLayoutTransitions(const MazeLayout& layout) {
  CheckReachable(layout);
  std::vector<Transition> out;
  for (int c = 0; c < kMazeCells; ++c) {
    if (c == kMazeGoal || layout.wall[c]) continue;
    for (int a = 0; a < kMazeActions; ++a) {
      int n = MazeNext(layout, c, a);
      out.push_back({MazeObservation(layout, c), a, -1.0, MazeObservation(layout, n),
                     n == kMazeGoal});
    }
  }
  return out;
}

std::vector<Transition> BasicSet() {
  std::vector<Transition> out;
  for (const MazeLayout& layout : SingleWallLayouts()) {
    auto part = EnumerateLayoutTransitions(layout);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::string CoverageLevelName(CoverageLevel level) {
  switch (level) {
    case CoverageLevel::kAllEvaluation:
      return "all-evaluation";
    case CoverageLevel::kPathToGoal:
      return "path-to-goal";
    case CoverageLevel::kSingleCell:
      return "single-cell";
    case CoverageLevel::kNoEvaluation:
      return "no-evaluation";
  }
  return "?";
}

CoverageLevel ParseCoverageLevel(const std::string& text) {
  for (CoverageLevel level : kAllCoverageLevels) {
    if (CoverageLevelName(level) == text) return level;
  }
  throw std::invalid_argument("unknown coverage level '" + text +
                              "' (expected all-evaluation, path-to-goal, single-cell, "
                              "no-evaluation)");
}

OpenPath UniqueOpenPath(const MazeLayout& layout) {
  if (layout.WallCells().size() != 2) {
    throw std::invalid_argument("evaluation layout " + layout.ToString() +
                                " must have exactly two walls");
  }
  CheckReachable(layout);
  auto degree = [&](int c) {
    int d = 0;
    for (int a = kUp; a <= kRight; ++a) {
      int m = GridMove(kMazeSide, c, a);
      if (m != c && !layout.wall[m]) ++d;
    }
    return d;
  };
  int edges2 = 0, free_cells = 0;
  for (int c = 0; c < kMazeCells; ++c) {
    if (layout.wall[c]) continue;
    ++free_cells;
    edges2 += degree(c);
    if (degree(c) > 2) {
      throw std::invalid_argument("evaluation layout " + layout.ToString() +
                                  " branches at cell " + std::to_string(c));
    }
  }
  if (edges2 / 2 != free_cells - 1 || degree(kMazeGoal) != 1) {
    throw std::invalid_argument("evaluation layout " + layout.ToString() +
                                " does not have a unique open path ending at the goal");
  }
  std::vector<int> dist = ReachDistance(layout);
  int far = static_cast<int>(std::max_element(dist.begin(), dist.end()) - dist.begin());
  OpenPath path;
  for (int c = far; c != kMazeGoal;) {
    path.cells.push_back(c);
    for (int a = kUp; a <= kRight; ++a) {
      int m = MazeNext(layout, c, a);
      if (m != c && dist[m] == dist[c] - 1) {
        path.actions.push_back(a);
        c = m;
        break;
      }
    }
  }
  path.cells.push_back(kMazeGoal);
  return path;
}

std::vector<Transition> BuildCoverageDataset(CoverageLevel level,
                                             const std::vector<MazeLayout>& eval_layouts) {
  std::vector<Transition> out = BasicSet();
  for (const MazeLayout& layout : eval_layouts) {
    OpenPath path = UniqueOpenPath(layout);
    switch (level) {
      case CoverageLevel::kAllEvaluation: {
        auto all = EnumerateLayoutTransitions(layout);
        out.insert(out.end(), all.begin(), all.end());
        break;
      }
      case CoverageLevel::kPathToGoal:
        for (std::size_t i = 0; i < path.actions.size(); ++i) {
          int c = path.cells[i], n = path.cells[i + 1];
          out.push_back({MazeObservation(layout, c), path.actions[i], -1.0,
                         MazeObservation(layout, n), n == kMazeGoal});
        }
        break;
      case CoverageLevel::kSingleCell: {
        int c = path.cells.front();
        for (int a = 0; a < kMazeActions; ++a) {
          int n = MazeNext(layout, c, a);
          out.push_back({MazeObservation(layout, c), a, -1.0, MazeObservation(layout, n),
                         n == kMazeGoal});
        }
        break;
      }
      case CoverageLevel::kNoEvaluation:
        break;
    }
  }
  return out;
}

std::vector<std::vector<int>> OptimalActions(const MazeLayout& layout) {
  if (layout.wall[kMazeGoal]) throw std::invalid_argument("maze layout: wall on the goal");
  const std::vector<int> dist = ReachDistance(layout);
  // States (t, cell) for t = 0..H plus a terminal; stepping at t = 0 ends the
  // episode, so any horizon H >= kMazeCells keeps shortest paths optimal.
  constexpr int kHorizon = kMazeCells;
  const int num_states = (kHorizon + 1) * kMazeCells + 1;
  const mdp::StateId terminal = num_states - 1;
  std::vector<mdp::StateId> next(num_states * kMazeActions, terminal);
  std::vector<int> reward(num_states * kMazeActions, 0);
  for (int t = 0; t <= kHorizon; ++t) {
    for (int c = 0; c < kMazeCells; ++c) {
      const int s = t * kMazeCells + c;
      for (int a = 0; a < kMazeActions; ++a) {
        if (c == kMazeGoal || layout.wall[c]) continue;
        int n = MazeNext(layout, c, a);
        reward[s * kMazeActions + a] = -1;
        if (t > 0 && n != kMazeGoal) next[s * kMazeActions + a] = (t - 1) * kMazeCells + n;
      }
    }
  }
  mdp::ExplicitMdp m = mdp::ExplicitMdp::Create(
      num_states, kMazeActions, terminal, next,
      mdp::RewardTable(num_states, kMazeActions, reward));
  mdp::QFunction q = mdp::SolveOptimalQ(m);
  std::vector<std::vector<int>> out(kMazeCells);
  for (int c = 0; c < kMazeCells; ++c) {
    if (c == kMazeGoal || layout.wall[c] || dist[c] < 0) continue;
    out[c] = mdp::GreedyActions(q, kHorizon * kMazeCells + c);
  }
  return out;
}

IllustrativeMaze::IllustrativeMaze(MazeLayout layout, std::uint64_t seed)
    : Environment(seed), layout_(layout) {
  CheckReachable(layout_);
}

BitObservation IllustrativeMaze::Reset() {
  std::vector<int> starts;
  for (int c = 0; c < kMazeCells; ++c) {
    if (c != kMazeGoal && !layout_.wall[c]) starts.push_back(c);
  }
  agent_ = starts[std::uniform_int_distribution<int>(0, static_cast<int>(starts.size()) - 1)(
      rng_)];
  return Observe();
}

StepResult IllustrativeMaze::Step(int action) {
  CheckAction(action);
  if (agent_ == kMazeGoal) throw std::logic_error("maze: Step after terminal; call Reset");
  agent_ = MazeNext(layout_, agent_, action);
  return {Observe(), -1.0, agent_ == kMazeGoal};
}

BitObservation IllustrativeMaze::Observe() const { return MazeObservation(layout_, agent_); }

void IllustrativeMaze::SetStateFromObservation(const BitObservation& obs) {
  auto [layout, agent] = DecodeMazeObservation(obs);
  layout_ = layout;
  agent_ = agent;
}

std::unique_ptr<Environment> IllustrativeMaze::Clone(std::uint64_t seed) const {
  return std::make_unique<IllustrativeMaze>(layout_, seed);
}

}  // namespace env
}  // namespace mbgen
