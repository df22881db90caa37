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

// The 3x3 offline maze: goal fixed in the top-left cell, walls vary by
// layout. Observation: [agent | goal | wall | no-wall], 9 bits each.

#ifndef MBGEN_ENV_ILLUSTRATIVE_MAZE_H_
#define MBGEN_ENV_ILLUSTRATIVE_MAZE_H_

#include <array>
#include <string>
#include <vector>

#include "mbgen/env/environment.h"

namespace mbgen {
namespace env {

inline constexpr int kMazeSide = 3;
inline constexpr int kMazeCells = 9;
inline constexpr int kMazeGoal = 0;
inline constexpr int kMazeActions = 5;

inline int MazeCell(int row, int col) { return row * kMazeSide + col; }

struct MazeLayout {
  std::array<std::uint8_t, kMazeCells> wall{};

  static MazeLayout FromWalls(std::initializer_list<std::array<int, 2>> row_cols);
  std::vector<int> WallCells() const;
  // "r,c;r,c" form, e.g. "1,0;1,1".
  std::string ToString() const;
  friend bool operator==(const MazeLayout&, const MazeLayout&) = default;
};

// Walls {(1,0),(1,1)} and {(0,1),(1,1)}.
MazeLayout LowerEvaluationLayout();
MazeLayout UpperEvaluationLayout();
// Accepts "lower", "upper" or an explicit "r,c;r,c" wall list.
MazeLayout ParseMazeLayout(const std::string& text);

// The eight layouts with one wall in a non-goal cell.
std::vector<MazeLayout> SingleWallLayouts();

BitObservation MazeObservation(const MazeLayout& layout, int agent_cell);
// Inverse of MazeObservation; throws UndecodableObservation.
std::pair<MazeLayout, int> DecodeMazeObservation(const BitObservation& obs);

// Deterministic dynamics: moves into walls or off the grid fail, reward -1,
// terminal on reaching the goal.
int MazeNext(const MazeLayout& layout, int cell, int action);

// Every (free non-goal cell, action) transition. Throws std::invalid_argument
// if some free cell cannot reach the goal.
std::vector<Transition> EnumerateLayoutTransitions(const MazeLayout& layout);

// Union of EnumerateLayoutTransitions over SingleWallLayouts().
std::vector<Transition> BasicSet();

enum class CoverageLevel { kAllEvaluation, kPathToGoal, kSingleCell, kNoEvaluation };

inline constexpr std::array<CoverageLevel, 4> kAllCoverageLevels = {
    CoverageLevel::kAllEvaluation, CoverageLevel::kPathToGoal, CoverageLevel::kSingleCell,
    CoverageLevel::kNoEvaluation};

// "all-evaluation", "path-to-goal", "single-cell", "no-evaluation".
std::string CoverageLevelName(CoverageLevel level);
CoverageLevel ParseCoverageLevel(const std::string& text);

// The open cells of a layout whose free cells form one simple path ending at
// the goal. cells runs from the farthest cell to the goal; actions[i] moves
// cells[i] to cells[i + 1].
struct OpenPath {
  std::vector<int> cells;
  std::vector<int> actions;
};

// Throws std::invalid_argument unless the layout has exactly two walls and a
// unique open path.
OpenPath UniqueOpenPath(const MazeLayout& layout);

std::vector<Transition> BuildCoverageDataset(CoverageLevel level,
                                             const std::vector<MazeLayout>& eval_layouts);

// Shortest-path distance of each cell to the goal, -1 for walls and cells
// that cannot reach it.
std::vector<int> ReachDistance(const MazeLayout& layout);

// Per cell, the set of actions on a shortest path to the goal (ascending).
// Empty for walls, the goal and cells that cannot reach it. Solved exactly on a time-indexed
// expansion of the maze.
std::vector<std::vector<int>> OptimalActions(const MazeLayout& layout);

// Episodic environment over a fixed layout; starts uniformly on a free
// non-goal cell.
class IllustrativeMaze final : public Environment {
 public:
  IllustrativeMaze(MazeLayout layout, std::uint64_t seed);

  std::string name() const override { return "maze3"; }
  int observation_size() const override { return 4 * kMazeCells; }
  int num_actions() const override { return kMazeActions; }
  bool episodic() const override { return true; }

  BitObservation Reset() override;
  StepResult Step(int action) override;
  BitObservation Observe() const override;
  void SetStateFromObservation(const BitObservation& obs) override;
  std::unique_ptr<Environment> Clone(std::uint64_t seed) const override;
  double spontaneous_probability() const override { return 0.0; }
  int episode_cap() const override { return 4 * kMazeCells; }

  const MazeLayout& layout() const { return layout_; }
  int agent() const { return agent_; }

 private:
  MazeLayout layout_;
  int agent_ = 1;
};

}  // namespace env
}  // namespace mbgen

#endif  // MBGEN_ENV_ILLUSTRATIVE_MAZE_H_
