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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mbgen/agent/training.h"
#include "mbgen/env/buttongrid.h"
#include "mbgen/env/opengrid.h"
#include "mbgen/env/panflute.h"
#include "mbgen/env/procmaze.h"
#include "mbgen/exact_mdp.h"
#include "mbgen/harness/config.h"
#include "mbgen/harness/offline.h"
#include "mbgen/harness/run.h"
#include "mbgen/hypothesis.h"
#include "mbgen/nn/gradcheck.h"
#include "mbgen/probe/smoothing.h"
#include "mbgen/runtime.h"

namespace mbgen {
namespace {

using Clock = std::chrono::steady_clock;
using hypothesis::QSet;

// Scale of the expensive criteria. "full" uses the reference budgets; the
// smaller profiles keep every check but shrink updates, seeds and widths.
struct Profile {
  std::string name;
  int fuzz_families = 500;
  int grad_networks = 50;

  int maze_seeds = 30;
  std::int64_t maze_updates = 1000000;
  double maze_step_size = 2e-4;
  std::vector<int> maze_hidden = {200, 200, 200};

  int online_seeds = 10;
  double online_scale = 1.0;
  int online_eval_interval = 5000;
  std::vector<int> online_hidden = {200, 200, 200};
  // Per-agent (step size, temperature); tuned values go here.
  std::map<agent::AgentKind, std::pair<double, double>> panflute_hparams;
  std::map<agent::AgentKind, std::pair<double, double>> opengrid_hparams;

  std::int64_t smoothing_train_steps = 10000;
  std::int64_t smoothing_probe_steps = 100000;

  std::int64_t oracle_steps = 1000000;
  int maze_generations = 10000;

  std::int64_t budget_steps = 200;
};

Profile MakeProfile(const std::string& name) {
  Profile p;
  p.name = name;
  if (name == "full") return p;
  if (name == "desk") {
    p.maze_seeds = 10;
    p.maze_updates = 100000;
    p.online_scale = 10.0;
    p.online_eval_interval = 1000;
    return p;
  }
  if (name == "smoke") {
    // The larger step size lets the offline suite settle within 10^4
    // updates.
    p.maze_seeds = 3;
    p.maze_updates = 10000;
    p.maze_step_size = 1e-3;
    p.online_seeds = 10;
    p.online_scale = 100.0;
    p.online_eval_interval = 1000;
    p.online_hidden = {64, 64, 64};
    for (agent::AgentKind kind : {agent::AgentKind::kExperienceReplay,
                                  agent::AgentKind::kSimpleModel,
                                  agent::AgentKind::kPerfectModel}) {
      p.panflute_hparams[kind] = {1e-3, 0.1};
      p.opengrid_hparams[kind] = {1e-3, 0.1};
    }
    return p;
  }
  throw std::invalid_argument("unknown profile '" + name + "' (smoke, desk or full)");
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(double v, int precision = 4) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

// -------------------------------------------------------------- criterion 1

Outcome TheoremInstances() {
  const auto start = Clock::now();
  std::vector<std::string> problems;
  for (bool extended : {false, true}) {
    hypothesis::Instance inst =
        extended ? hypothesis::BuildExtendedExample() : hypothesis::BuildCounterexample();
    const std::string tag = extended ? "extended" : "base";
    hypothesis::HypothesisReport r = hypothesis::VerifyTheorem(*inst.family, inst.data);
    const mdp::QFunction truth =
        mdp::SolveOptimalQ(inst.family->Materialize(hypothesis::ToggleModelIndex(*inst.family)));
    if (r.hm_size != 1 || !r.hm.contains(truth.Key())) {
      problems.push_back(tag + ": H_M(D) is not {q*}");
    }
    if (!r.subset_holds || !r.strict) problems.push_back(tag + ": inclusion not strict");
    if (!hypothesis::IsWitness(r, hypothesis::ReferenceWitness(*inst.family))) {
      problems.push_back(tag + ": reference witness missing");
    }
  }
  auto tabular = hypothesis::BuildTabularFamily(2, 1, 2);
  std::mt19937_64 rng(0);
  int equal = 0;
  for (int i = 0; i < 20; ++i) {
    const std::uint64_t model = rng() % tabular->size();
    hypothesis::Dataset data = hypothesis::SampleMemberDataset(*tabular, model, rng);
    equal += hypothesis::VerifyTheorem(*tabular, data).equal;
  }
  if (equal != 20) problems.push_back("tabular: H_M != H_B on " + std::to_string(20 - equal));
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (seconds >= 10.0) problems.push_back("took " + Fmt(seconds) + " s");
  Outcome o{problems.empty(), "strict on both instances, tabular equal on " +
                                  std::to_string(equal) + "/20"};
  for (const std::string& p : problems) o.detail += "; " + p;
  return o;
}

// -------------------------------------------------------------- criterion 2

std::unique_ptr<hypothesis::TransitionFamily> RandomFamily(std::mt19937_64& rng) {
  const int countdown = 1 + static_cast<int>(rng() % 3);
  const int bits = 1 + static_cast<int>(rng() % 2);
  const int actions = 1 + static_cast<int>(rng() % 3);
  hypothesis::CountdownStateSpace space(countdown, bits);
  std::vector<int> values(space.num_states() * actions, 0);
  for (mdp::StateId s = 0; s < space.terminal(); ++s) {
    for (int a = 0; a < actions; ++a) values[s * actions + a] = static_cast<int>(rng() % 3) - 1;
  }
  mdp::RewardTable reward(space.num_states(), actions, values);
  // Occasionally pin one action's dynamics.
  hypothesis::FactoredFamily::FixedDynamics fixed;
  if (actions > 1 && rng() % 3 == 0) {
    std::vector<std::array<int, 2>> table(bits);
    for (auto& t : table) t = {static_cast<int>(rng() % 2), static_cast<int>(rng() % 2)};
    fixed[actions - 1] = table;
  }
  return std::make_unique<hypothesis::FactoredFamily>(countdown, bits, actions, reward, fixed);
}

Outcome FuzzedInclusion(int families) {
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  int holds = 0, strict = 0;
  for (int i = 0; i < families; ++i) {
    auto family = RandomFamily(rng);
    const std::uint64_t model = rng() % family->size();
    hypothesis::Dataset data = hypothesis::SampleMemberDataset(*family, model, rng);
    hypothesis::HypothesisReport r = hypothesis::VerifyTheorem(*family, data);
    // Recheck the reported inclusion against an independent H_B(D).
    const QSet hb = hypothesis::ComputeHB(*family, data);
    bool subset = hb.size() == r.hb_size;
    for (const auto& entry : r.hm) subset = subset && hb.contains(entry.first);
    holds += r.subset_holds && subset;
    strict += r.strict;
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return {holds == families && seconds < 120.0,
          std::to_string(holds) + "/" + std::to_string(families) + " families, " +
              std::to_string(strict) + " strict, " + Fmt(seconds, 3) + " s"};
}

// -------------------------------------------------------------- criterion 3

Outcome GradientAgreement(int networks) {
  const auto start = Clock::now();
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> width(1, 8), depth(1, 3);
  double worst = 0.0;
  for (int i = 0; i < networks; ++i) {
    nn::Architecture arch;
    arch.input = width(rng);
    arch.hidden.resize(depth(rng));
    for (int& h : arch.hidden) h = width(rng);
    arch.heads = {width(rng), width(rng), 1};
    worst = std::max(worst, nn::RandomNetworkGradientError(arch, 1 + i % 6, rng));
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return {worst < 1e-4 && seconds < 60.0,
          std::to_string(networks) + " networks x 3 losses, max relative error " +
              Fmt(worst, 3)};
}

// -------------------------------------------------------------- criterion 4

Outcome MazeMatrix(const Profile& p, int jobs) {
  harness::OfflineSuiteConfig c;
  c.seeds = p.maze_seeds;
  c.updates = p.maze_updates;
  c.step_size = p.maze_step_size;
  c.hidden = p.maze_hidden;
  c.model_hidden = p.maze_hidden;
  c.jobs = jobs;
  const std::map<std::pair<env::CoverageLevel, std::string>, bool> expected = {
      {{env::CoverageLevel::kAllEvaluation, "model-free"}, true},
      {{env::CoverageLevel::kAllEvaluation, "1-step"}, true},
      {{env::CoverageLevel::kAllEvaluation, "10-step"}, true},
      {{env::CoverageLevel::kPathToGoal, "model-free"}, false},
      {{env::CoverageLevel::kPathToGoal, "1-step"}, true},
      {{env::CoverageLevel::kPathToGoal, "10-step"}, true},
      {{env::CoverageLevel::kSingleCell, "model-free"}, false},
      {{env::CoverageLevel::kSingleCell, "1-step"}, false},
      {{env::CoverageLevel::kSingleCell, "10-step"}, true},
      {{env::CoverageLevel::kNoEvaluation, "model-free"}, false},
      {{env::CoverageLevel::kNoEvaluation, "1-step"}, false},
      {{env::CoverageLevel::kNoEvaluation, "10-step"}, false},
  };
  std::string matrix, mismatches;
  int matched = 0;
  harness::RunOfflineSuite(c, [&](const harness::OfflineCellResult& cell) {
    const bool want = expected.at({cell.level, cell.variant.name});
    matrix += cell.grid.pass ? 'P' : 'F';
    if (cell.grid.pass == want) {
      ++matched;
    } else {
      mismatches += " " + env::CoverageLevelName(cell.level) + "/" + cell.variant.name;
    }
  });
  return {matched == 12, "verdicts " + matrix + " (expected PPPFPPFFPFFF), " +
                             std::to_string(matched) + "/12 match" +
                             (mismatches.empty() ? "" : ";" + mismatches)};
}

// ----------------------------------------------------------- criteria 5, 6

harness::ExperimentConfig OnlineBase(const Profile& p, const env::EnvSpec& spec,
                                     agent::AgentKind kind,
                                     const std::map<agent::AgentKind, std::pair<double, double>>&
                                         hparams,
                                     int jobs) {
  harness::ExperimentConfig c;
  c.env = spec;
  c.agent = kind;
  c.regime = "low";
  c.scale = p.online_scale;
  c.eval_interval = p.online_eval_interval;
  c.hidden = p.online_hidden;
  c.model_hidden = p.online_hidden;
  c.seeds = p.online_seeds;
  c.jobs = jobs;
  if (auto it = hparams.find(kind); it != hparams.end()) {
    c.q_step_size = it->second.first;
    c.temperature = it->second.second;
  }
  return c;
}

MeanCi OnlineScore(const harness::ExperimentConfig& c) {
  return harness::FinalScoreStats(harness::RunExperiment(c));
}

std::string Describe(const std::string& name, const MeanCi& s) {
  return name + " " + Fmt(s.mean) + " +/- " + Fmt(s.half_width, 2);
}

Outcome PanFluteOrdering(const Profile& p, int jobs) {
  env::EnvSpec spec;
  spec.name = "panflute";
  spec.size = 7;
  const MeanCi er = OnlineScore(
      OnlineBase(p, spec, agent::AgentKind::kExperienceReplay, p.panflute_hparams, jobs));
  const MeanCi simple =
      OnlineScore(OnlineBase(p, spec, agent::AgentKind::kSimpleModel, p.panflute_hparams, jobs));
  const MeanCi perfect =
      OnlineScore(OnlineBase(p, spec, agent::AgentKind::kPerfectModel, p.panflute_hparams, jobs));
  const bool separated = simple.lower() > er.upper();
  const bool perfect_ok = perfect.mean >= 0.9 / 7.0;
  return {separated && perfect_ok, Describe("simple", simple) + ", " + Describe("er", er) +
                                       ", " + Describe("perfect", perfect) +
                                       " (target >= " + Fmt(0.9 / 7.0) + ")"};
}

Outcome OpenGridControl(const Profile& p, int jobs) {
  std::vector<double> gaps;
  std::string detail;
  for (int size : {6, 12, 18}) {
    env::EnvSpec spec;
    spec.name = "opengrid";
    spec.size = size;
    const MeanCi er = OnlineScore(
        OnlineBase(p, spec, agent::AgentKind::kExperienceReplay, p.opengrid_hparams, jobs));
    const MeanCi simple = OnlineScore(
        OnlineBase(p, spec, agent::AgentKind::kSimpleModel, p.opengrid_hparams, jobs));
    gaps.push_back(simple.mean - er.mean);
    detail += (detail.empty() ? "" : ", ") + std::string("gap(") + std::to_string(size) +
              ")=" + Fmt(gaps.back());
  }
  const bool decreasing = gaps[0] > gaps[1] && gaps[1] > gaps[2];
  return {decreasing && gaps[2] < 0.0, detail};
}

// -------------------------------------------------------------- criterion 7

Outcome Smoothing(const Profile& p) {
  const int pipes = 9;
  std::vector<std::string> problems;

  // The oracle profile is exact: reward 1 only with every end active, and
  // without spontaneous events the all-ends prediction is exact too.
  probe::SmoothingConfig truth_cfg;
  truth_cfg.steps = p.smoothing_probe_steps;
  truth_cfg.disable_spontaneous = true;
  probe::SmoothingProfile truth =
      probe::SmoothingProbe(probe::GroundTruthPredictor(pipes), pipes, truth_cfg);
  for (int b = 0; b <= pipes; ++b) {
    const double want = b == pipes ? 1.0 : 0.0;
    if (truth.reward_count[b] > 0 && truth.reward_mean[b] != want) {
      problems.push_back("oracle reward bin " + std::to_string(b));
    }
    if (truth.next_count[b] > 0 && truth.all_next_mean[b] != want) {
      problems.push_back("oracle next bin " + std::to_string(b));
    }
  }

  agent::OnlineConfig oc;
  oc.env.name = "panflute";
  oc.env.size = pipes;
  oc.agent.kind = agent::AgentKind::kSimpleModel;
  oc.agent.episodic = false;
  oc.steps = p.smoothing_train_steps;
  oc.updates_per_step = 1;
  oc.eval_interval = static_cast<int>(p.smoothing_train_steps);
  oc.seed = 0;
  std::optional<nn::MlpParams<float>> trained;
  oc.model_checkpoints = {p.smoothing_train_steps};
  oc.on_model_checkpoint = [&](std::int64_t, const agent::SimpleDynamicsModel& m) {
    trained = m.params();
  };
  agent::RunResult run = agent::TrainOnline(oc);
  if (run.failed || !trained) return {false, "training failed: " + run.error};
  agent::SimpleDynamicsModel model(*trained, pipes);
  probe::SmoothingConfig probe_cfg;
  probe_cfg.steps = p.smoothing_probe_steps;
  probe_cfg.seed = 1;
  probe::SmoothingProfile learned =
      probe::SmoothingProbe(probe::ModelPredictor(model), pipes, probe_cfg);
  const probe::MonotonicityReport mono = probe::RewardMonotonicity(learned);
  const double rise = learned.reward_mean[pipes] - learned.reward_mean[0];
  if (mono.inversions > 1 || mono.largest_drop > 0.02) {
    problems.push_back(std::to_string(mono.inversions) + " inversions, largest drop " +
                       Fmt(mono.largest_drop, 3));
  }
  if (!(rise >= 0.1)) problems.push_back("bin 9 - bin 0 = " + Fmt(rise, 3));
  std::string curve;
  for (int b = 0; b <= pipes; ++b) {
    curve += (b ? " " : "") + (learned.reward_count[b] ? Fmt(learned.reward_mean[b], 2) : "-");
  }
  Outcome o{problems.empty(), "reward by active ends [" + curve + "]"};
  for (const std::string& s : problems) o.detail += "; " + s;
  return o;
}

// -------------------------------------------------------------- criterion 8

bool WithinThreeSigma(std::int64_t events, std::int64_t n, double prob, std::string* log) {
  const double mean = n * prob, sigma = std::sqrt(n * prob * (1 - prob));
  const double z = (events - mean) / sigma;
  *log += " z=" + Fmt(z, 2);
  return std::abs(z) <= 3.0;
}

bool Connected(const std::vector<std::uint8_t>& walls, int n) {
  int start = -1, free_cells = 0;
  for (int i = 0; i < n * n; ++i) {
    if (!walls[i]) {
      ++free_cells;
      start = i;
    }
  }
  if (start < 0) return false;
  std::vector<bool> seen(n * n, false);
  std::queue<int> q;
  q.push(start);
  seen[start] = true;
  int reached = 1;
  while (!q.empty()) {
    const int c = q.front();
    q.pop();
    for (int a = env::kUp; a <= env::kRight; ++a) {
      const int m = env::GridMove(n, c, a);
      if (!walls[m] && !seen[m]) {
        seen[m] = true;
        ++reached;
        q.push(m);
      }
    }
  }
  return reached == free_cells;
}

Outcome EnvironmentOracles(const Profile& p) {
  bool ok = true;
  std::string detail = "pipelined 1/n:";
  for (int n : {3, 5, 7}) {
    env::PanFlute flute(n, 1, {.disable_spontaneous = true});
    flute.Reset();
    for (int t = 0; t < n; ++t) flute.Step(t % n);
    const int window = n * ((10000 + n - 1) / n);
    double total = 0.0;
    for (int t = 0; t < window; ++t) total += flute.Step(t % n).reward;
    const bool exact = total * n == window;
    ok = ok && exact;
    detail += exact ? " ok" : " MISS";
  }

  const std::int64_t steps = p.oracle_steps;
  detail += "; spontaneous:";
  {
    env::PanFlute flute(7, 2);
    flute.Reset();
    for (std::int64_t i = 0; i < steps; ++i) flute.Step(static_cast<int>(i % 7));
    ok = WithinThreeSigma(flute.spontaneous_events(), steps, 1.0 / 49, &detail) && ok;
  }
  {
    env::ButtonGrid grid(4, 3);
    grid.Reset();
    std::mt19937_64 rng(3);
    for (std::int64_t i = 0; i < steps; ++i) grid.Step(static_cast<int>(rng() % 5));
    ok = WithinThreeSigma(grid.spontaneous_events(), steps, 0.1 / 25, &detail) && ok;
  }
  {
    env::ProcMaze maze(6, 4);
    maze.Reset();
    for (std::int64_t i = 0; i < steps; ++i) {
      if (maze.Step(static_cast<int>(i % 5)).terminal) maze.Reset();
    }
    ok = WithinThreeSigma(maze.spontaneous_events(), steps,
                          0.1 / maze.teleport_horizon(), &detail) &&
         ok;
  }
  {
    env::OpenGrid grid(12, 5);
    grid.Reset();
    for (std::int64_t i = 0; i < steps; ++i) {
      if (grid.Step(i % 2 == 0 ? env::kDown : env::kRight).terminal) grid.Reset();
    }
    ok = WithinThreeSigma(grid.spontaneous_events(), steps, 0.1 / 12, &detail) && ok;
  }

  int connected = 0;
  for (int size : {4, 6, 8}) {
    env::ProcMaze maze(size, 6);
    for (int i = 0; i < p.maze_generations; ++i) {
      maze.Reset();
      connected += Connected(maze.walls(), size) && maze.agent() != maze.goal();
    }
  }
  ok = ok && connected == 3 * p.maze_generations;
  detail += "; connected mazes " + std::to_string(connected) + "/" +
            std::to_string(3 * p.maze_generations);
  return {ok, detail};
}

// -------------------------------------------------------------- criterion 9

Outcome BudgetInvariant(const Profile& p) {
  bool ok = true;
  std::string detail;
  const std::vector<std::pair<std::string, int>> envs = {
      {"panflute", 5}, {"buttongrid", 4}, {"procmaze", 4}, {"opengrid", 6}};
  for (const auto& [name, size] : envs) {
    for (agent::AgentKind kind : {agent::AgentKind::kExperienceReplay,
                                  agent::AgentKind::kSimpleModel,
                                  agent::AgentKind::kPerfectModel}) {
      for (int k : {1, 10}) {
        if (kind == agent::AgentKind::kExperienceReplay && k == 10) continue;
        agent::OnlineConfig oc;
        oc.env.name = name;
        oc.env.size = size;
        oc.agent.kind = kind;
        oc.agent.rollout_length = k;
        oc.agent.q.hidden = {16};
        oc.agent.model_hidden = {16};
        oc.steps = p.budget_steps;
        oc.updates_per_step = 1;
        oc.warmup = 100;
        oc.eval_interval = static_cast<int>(p.budget_steps);
        oc.eval.episodes = 1;
        oc.eval.steps = 10;
        agent::RunResult r = agent::TrainOnline(oc);
        const bool episodic = env::MakeEnvironment(oc.env, 0)->episodic();
        const agent::BudgetCounters& b = r.budget;
        const bool good = !r.failed && b.updates == p.budget_steps &&
                          (episodic ? b.max_per_update <= 320
                                    : b.min_per_update == 320 && b.max_per_update == 320);
        if (!good) {
          ok = false;
          detail += " " + name + "/" + agent::AgentKindName(kind) + "/k=" + std::to_string(k) +
                    " [" + std::to_string(b.min_per_update) + "," +
                    std::to_string(b.max_per_update) + "]";
        }
      }
    }
  }
  return {ok, ok ? "exactly 320 per update when continuing, at most 320 when episodic, 4 "
                   "environments x 5 agent settings"
                 : "violations:" + detail};
}

}  // namespace

int Main(int argc, char** argv) {
  CLI::App app{"Acceptance checks", "acceptance"};
  std::string profile_name = "smoke";
  std::vector<int> only;
  int jobs = 1;
  std::string out;
  app.add_option("--profile", profile_name, "smoke, desk or full");
  app.add_option("--only", only, "criteria to run (default all)")->delimiter(',');
  app.add_option("--jobs", jobs, "worker threads for multi-seed criteria");
  app.add_option("--out", out, "JSON results path");
  CLI11_PARSE(app, argc, argv);
  const Profile p = MakeProfile(profile_name);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"theorem instances", [&] { return TheoremInstances(); }},
      {"fuzzed inclusion", [&] { return FuzzedInclusion(p.fuzz_families); }},
      {"gradient agreement", [&] { return GradientAgreement(p.grad_networks); }},
      {"offline maze matrix", [&] { return MazeMatrix(p, jobs); }},
      {"panflute ordering", [&] { return PanFluteOrdering(p, jobs); }},
      {"opengrid control", [&] { return OpenGridControl(p, jobs); }},
      {"smoothing profile", [&] { return Smoothing(p); }},
      {"environment oracles", [&] { return EnvironmentOracles(p); }},
      {"budget invariant", [&] { return BudgetInvariant(p); }},
  };
  std::cout << "profile " << p.name << std::endl;
  nlohmann::json results = nlohmann::json::array();
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto start = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << id << " " << criteria[i].first << ": "
              << o.detail << " [" << Fmt(seconds, 3) << " s]" << std::endl;
    results.push_back({{"criterion", id},
                       {"name", criteria[i].first},
                       {"pass", o.pass},
                       {"detail", o.detail},
                       {"seconds", seconds}});
  }
  if (!out.empty()) {
    harness::WriteTextFile(out, nlohmann::json{{"profile", p.name}, {"results", results}}.dump(2) +
                                    "\n");
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace mbgen

int main(int argc, char** argv) {
  mbgen::ConfigureAllocator();
  return mbgen::Main(argc, argv);
}
