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

// Command-line front end: theorem verification, online runs, grid search,
// the offline maze suite and the model probes.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mbgen/exact_mdp.h"
#include "mbgen/harness/config.h"
#include "mbgen/harness/grid.h"
#include "mbgen/harness/offline.h"
#include "mbgen/harness/records.h"
#include "mbgen/harness/run.h"
#include "mbgen/hypothesis.h"
#include "mbgen/nn/checkpoint.h"
#include "mbgen/probe/aggregate.h"
#include "mbgen/probe/frozen.h"
#include "mbgen/probe/maze.h"
#include "mbgen/probe/smoothing.h"
#include "mbgen/runtime.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace mbgen {
namespace {

void WriteOutput(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    harness::WriteTextFile(path, text);
  }
}

// ---------------------------------------------------------------- theorem

struct TheoremArgs {
  bool extended = false;
  bool tabular = false;
  std::string family_file;
  std::string mdp_file;
  std::string out;
  int tabular_datasets = 20;
  std::uint64_t seed = 0;
  int threads = 1;
};

json SolveMdpFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  mdp::ExplicitMdp m = mdp::ParseMdpText(in);
  mdp::QFunction q = mdp::SolveOptimalQ(m);
  json states = json::object();
  for (mdp::StateId s = 0; s < m.num_states(); ++s) {
    if (m.IsTerminal(s)) continue;
    std::vector<int> row(m.num_actions());
    for (int a = 0; a < m.num_actions(); ++a) row[a] = q(s, a);
    states[m.Label(s)] = {{"q", row}, {"greedy", mdp::GreedyActions(q, s)}};
  }
  const bool consistent = mdp::BellmanConsistent(q, m.reward(), m.AllTransitions());
  std::cout << "states=" << m.num_states() << " actions=" << m.num_actions()
            << " bellman_consistent=" << (consistent ? "true" : "false") << "\n";
  return {{"num_states", m.num_states()},
          {"num_actions", m.num_actions()},
          {"terminal", m.Label(m.terminal())},
          {"bellman_consistent", consistent},
          {"optimal_q", states}};
}

void PrintReport(const hypothesis::HypothesisReport& r) {
  std::cout << r.family << ": |M|=" << r.family_size << " |D|=" << r.dataset_size
            << " |H_Q|=" << r.hq_size << " |H_B(D)|=" << r.hb_size << " |H_M(D)|=" << r.hm_size
            << " subset=" << (r.subset_holds ? "true" : "false")
            << " strict=" << (r.strict ? "true" : "false") << "\n";
}

int RunVerifyTheorem(const TheoremArgs& args) {
  hypothesis::EnumerationOptions opts{args.threads};
  json out;
  bool ok = true;
  if (!args.mdp_file.empty()) {
    out = SolveMdpFile(args.mdp_file);
  } else if (args.tabular) {
    auto family = hypothesis::BuildTabularFamily(2, 1, 2);
    std::mt19937_64 rng(args.seed);
    json reports = json::array();
    int strict = 0;
    for (int i = 0; i < args.tabular_datasets; ++i) {
      const std::uint64_t model = rng() % family->size();
      hypothesis::Dataset data = hypothesis::SampleMemberDataset(*family, model, rng);
      hypothesis::HypothesisReport r = hypothesis::VerifyTheorem(*family, data, opts);
      ok = ok && r.subset_holds && r.equal;
      strict += r.strict;
      json j = hypothesis::ReportToJson(r, *family);
      j["member"] = model;
      reports.push_back(j);
    }
    std::cout << family->Describe() << ": datasets=" << args.tabular_datasets
              << " strict=" << strict << " (tabular families never separate)\n";
    out = {{"family", family->Describe()}, {"reports", reports}};
  } else {
    hypothesis::Instance inst = !args.family_file.empty()
                                    ? hypothesis::LoadFamilyFile(args.family_file)
                                : args.extended ? hypothesis::BuildExtendedExample()
                                                : hypothesis::BuildCounterexample();
    hypothesis::HypothesisReport r = hypothesis::VerifyTheorem(*inst.family, inst.data, opts);
    PrintReport(r);
    out = hypothesis::ReportToJson(r, *inst.family);
    ok = r.subset_holds;
    if (args.family_file.empty()) {
      const bool witness = hypothesis::IsWitness(r, hypothesis::ReferenceWitness(*inst.family));
      out["reference_witness_found"] = witness;
      out["true_model"] = hypothesis::ToggleModelIndex(*inst.family);
      std::cout << "reference witness in H_B(D) \\ H_M(D): " << (witness ? "yes" : "no")
                << "\n";
      ok = ok && r.strict && witness;
    }
  }
  WriteOutput(args.out, out.dump(2) + "\n");
  return ok ? 0 : 1;
}

// -------------------------------------------------------------------- run

struct ExperimentArgs {
  std::string env = "panflute";
  int size = 7;
  bool disable_spontaneous = false;
  int teleport_horizon = 0;
  std::string layout = "lower";
  std::string agent = "simple-model";
  std::string regime = "low";
  double scale = 1.0;
  int rollout_length = 10;
  double step_size = 1e-4;
  double temperature = 0.1;
  int eval_interval = 5000;
  int eval_episodes = 10;
  int eval_steps = 1000;
  int seeds = 30;
  std::uint64_t first_seed = 0;
  int jobs = 1;
  std::string out;
};

void AddExperimentFlags(CLI::App* cmd, ExperimentArgs* a, bool with_env_size) {
  cmd->add_option("--env", a->env, "procmaze, buttongrid, panflute, opengrid or maze3");
  if (with_env_size) cmd->add_option("--size", a->size, "grid side, buttons or pipes");
  cmd->add_flag("--disable-spontaneous", a->disable_spontaneous,
                "remove the spontaneous rewarding/terminal event");
  cmd->add_option("--teleport-horizon", a->teleport_horizon, "ProcMaze T (0: size^2)");
  cmd->add_option("--layout", a->layout, "maze3 layout: lower, upper or r,c;r,c");
  cmd->add_option("--agent", a->agent, "er, simple-model or perfect-model");
  cmd->add_option("--regime", a->regime, "low or high");
  cmd->add_option("--scale", a->scale, "divides the environment step count");
  cmd->add_option("--rollout-length", a->rollout_length, "model rollout length k");
  cmd->add_option("--eval-interval", a->eval_interval, "updates between evaluations");
  cmd->add_option("--eval-episodes", a->eval_episodes, "greedy episodes per evaluation");
  cmd->add_option("--eval-steps", a->eval_steps, "greedy steps per evaluation (continuing)");
  cmd->add_option("--seeds", a->seeds, "number of seeds");
  cmd->add_option("--first-seed", a->first_seed, "first seed");
  cmd->add_option("--jobs", a->jobs, "worker threads");
  cmd->add_option("--out", a->out, "output directory");
}

harness::ExperimentConfig ToExperimentConfig(const ExperimentArgs& a) {
  harness::ExperimentConfig c;
  c.env.name = a.env;
  c.env.size = a.size;
  c.env.disable_spontaneous = a.disable_spontaneous;
  c.env.teleport_horizon = a.teleport_horizon;
  c.env.layout = a.layout;
  c.agent = agent::ParseAgentKind(a.agent);
  c.regime = a.regime;
  c.scale = a.scale;
  c.rollout_length = a.rollout_length;
  c.q_step_size = a.step_size;
  c.temperature = a.temperature;
  c.eval_interval = a.eval_interval;
  c.eval_episodes = a.eval_episodes;
  c.eval_steps = a.eval_steps;
  c.seeds = a.seeds;
  c.first_seed = a.first_seed;
  c.jobs = a.jobs;
  c.output = a.out;
  return c;
}

void PrintRecord(const harness::RunRecord& r) {
  std::cout << "seed " << r.seed << ": final_score=" << r.final_score
            << (r.failed ? " FAILED " + r.error : "") << std::endl;
}

int RunRun(harness::ExperimentConfig config, const std::vector<std::int64_t>& checkpoints) {
  harness::RunOptions options;
  options.model_checkpoints = checkpoints;
  options.on_record = PrintRecord;
  std::cout << "config " << harness::ConfigHash(config) << "\n";
  std::vector<harness::RunRecord> records = harness::RunExperiment(config, options);
  const MeanCi stats = harness::FinalScoreStats(records);
  std::cout << "final score " << stats.mean << " +/- " << stats.half_width << " (n=" << stats.n
            << ")\n";
  if (!config.output.empty()) {
    probe::AggregatedCurve curve = probe::Aggregate(records);
    std::ostringstream csv;
    probe::WriteAggregateCsv(curve, csv);
    harness::WriteTextFile((fs::path(config.output) / "curve.csv").string(), csv.str());
  }
  return 0;
}

// ------------------------------------------------------------ grid search

int RunGridSearch(harness::ExperimentConfig base, const harness::GridSpec& spec) {
  std::cout << "tuning " << base.env.name << " " << base.env.size << " with "
            << agent::AgentKindName(base.agent) << "\n";
  harness::CellEvaluator inner = harness::ExperimentEvaluator(base);
  harness::GridResult result = harness::GridSearch(spec, [&](double step, double temp) {
    harness::GridCell cell = inner(step, temp);
    std::cout << "step_size=" << harness::FormatDouble(step)
              << " temperature=" << harness::FormatDouble(temp) << " score=" << cell.score.mean
              << std::endl;
    return cell;
  });
  std::cout << "best step_size=" << harness::FormatDouble(result.best.step_size)
            << " temperature=" << harness::FormatDouble(result.best.temperature)
            << " score=" << result.best.score.mean << "\n";
  if (!base.output.empty()) {
    const fs::path dir(base.output);
    auto write_csv = [&](const std::string& name, const std::vector<harness::GridCell>& cells) {
      std::ostringstream csv;
      harness::WriteGridCsv(cells, csv);
      harness::WriteTextFile((dir / name).string(), csv.str());
    };
    write_csv("grid.csv", result.table);
    write_csv("step_slice.csv", result.step_slice);
    write_csv("temperature_slice.csv", result.temperature_slice);
    json summary = harness::GridResultJson(result);
    summary["config"] = harness::ToConfigMap(base);
    harness::WriteTextFile((dir / "summary.json").string(), summary.dump(2) + "\n");
  }
  return 0;
}

// ---------------------------------------------------------------- offline

struct OfflineArgs {
  std::vector<std::string> coverage = {"all"};
  std::vector<std::string> agents = {"all"};
  int seeds = 30;
  std::uint64_t first_seed = 0;
  std::int64_t updates = 1000000;
  double step_size = 2e-4;
  double temperature = 0.1;
  std::string hidden = "200,200,200";
  std::string model_hidden = "200,200,200";
  std::string layout = "lower";
  int jobs = 1;
  std::string out;
};

int RunOffline(const OfflineArgs& a) {
  harness::OfflineSuiteConfig c;
  if (!(a.coverage.size() == 1 && a.coverage[0] == "all")) {
    c.levels.clear();
    for (const std::string& s : a.coverage) c.levels.push_back(env::ParseCoverageLevel(s));
  }
  if (!(a.agents.size() == 1 && a.agents[0] == "all")) {
    c.variants.clear();
    for (const std::string& s : a.agents) c.variants.push_back(harness::ParseOfflineVariant(s));
  }
  c.seeds = a.seeds;
  c.first_seed = a.first_seed;
  c.updates = a.updates;
  c.step_size = a.step_size;
  c.temperature = a.temperature;
  c.hidden = harness::ParseIntList(a.hidden);
  c.model_hidden = harness::ParseIntList(a.model_hidden);
  c.verdict_layout = env::ParseMazeLayout(a.layout);
  c.jobs = a.jobs;
  c.output = a.out;
  harness::RunOfflineSuite(c, [](const harness::OfflineCellResult& cell) {
    std::cout << env::CoverageLevelName(cell.level) << " " << cell.variant.name << ": "
              << (cell.grid.pass ? "pass" : "fail");
    for (int f : cell.grid.failing) std::cout << " failing_cell=" << f;
    if (std::isfinite(cell.position_accuracy)) {
      std::cout << " position_accuracy=" << cell.position_accuracy;
    }
    std::cout << std::endl;
  });
  return 0;
}

// ----------------------------------------------------------------- probes

struct SmoothingArgs {
  std::string model;
  bool ground_truth = false;
  int pipes = 9;
  std::int64_t steps = 100000;
  bool disable_spontaneous = false;
  std::uint64_t seed = 0;
  std::string out;
};

int RunProbeSmoothing(const SmoothingArgs& a) {
  probe::SmoothingConfig sc;
  sc.steps = a.steps;
  sc.disable_spontaneous = a.disable_spontaneous;
  sc.seed = a.seed;
  probe::SmoothingProfile profile;
  if (a.ground_truth) {
    profile = probe::SmoothingProbe(probe::GroundTruthPredictor(a.pipes), a.pipes, sc);
  } else {
    if (a.model.empty()) throw std::invalid_argument("--model or --ground-truth is required");
    nn::Checkpoint ckpt = nn::LoadCheckpoint(a.model);
    agent::SimpleDynamicsModel model(ckpt.params, a.pipes);
    profile = probe::SmoothingProbe(probe::ModelPredictor(model), a.pipes, sc);
  }
  std::ostringstream csv;
  probe::WriteSmoothingCsv(profile, csv);
  WriteOutput(a.out, csv.str());
  const probe::MonotonicityReport mono = probe::RewardMonotonicity(profile);
  std::cerr << "reward inversions=" << mono.inversions << " largest_drop=" << mono.largest_drop
            << "\n";
  return 0;
}

struct FrozenArgs {
  std::string ckpt_dir;
  int pipes = 9;
  std::string regime = "high";
  double scale = 1.0;
  int seeds = 30;
  std::uint64_t first_seed = 0;
  double threshold = 0.0;
  int reward_bin = 6;
  std::int64_t probe_steps = 100000;
  int jobs = 1;
  std::string out;
};

int RunProbeFrozen(const FrozenArgs& a) {
  probe::FrozenStudyConfig c = probe::DefaultFrozenStudyConfig();
  c.base.env.size = a.pipes;
  agent::ApplyRegime(c.base, a.regime, a.scale);
  c.seeds = a.seeds;
  c.first_seed = a.first_seed;
  c.threshold = a.threshold;
  c.reward_bin = a.reward_bin;
  c.probe_steps = a.probe_steps;
  c.jobs = a.jobs;
  std::vector<probe::FrozenCheckpoint> ckpts = probe::LoadModelCheckpoints(a.ckpt_dir);
  if (ckpts.empty()) throw std::runtime_error("no model checkpoints under " + a.ckpt_dir);
  std::vector<probe::FrozenModelResult> results = probe::FrozenModelStudy(ckpts, c);
  for (const probe::FrozenModelResult& r : results) {
    std::cout << "update " << r.checkpoint_update << ": " << r.successes << "/" << r.seeds.size()
              << " reached, predicted reward at bin " << c.reward_bin << " = "
              << r.predicted_reward_at_bin << "\n";
  }
  std::ostringstream csv;
  probe::WriteFrozenCsv(results, csv);
  WriteOutput(a.out, csv.str());
  return 0;
}

struct CellsArgs {
  std::string qnet_dir;
  std::string layout = "lower";
  std::string out;
};

int RunProbeCells(const CellsArgs& a) {
  std::vector<fs::path> stems;
  for (const auto& entry : fs::directory_iterator(a.qnet_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("q_seed_", 0) == 0 && entry.path().extension() == ".json") {
      stems.push_back(entry.path());
    }
  }
  if (stems.empty()) throw std::runtime_error("no q_seed_* checkpoints in " + a.qnet_dir);
  std::sort(stems.begin(), stems.end());
  std::vector<nn::MlpParams<float>> qnets;
  for (const fs::path& p : stems) {
    nn::Checkpoint c = nn::LoadCheckpoint(p.string());
    const nn::Architecture& arch = c.params.arch();
    if (arch.input != 4 * env::kMazeCells || arch.heads != std::vector<int>{env::kMazeActions}) {
      throw std::runtime_error(p.string() + " is not a maze Q-network");
    }
    qnets.push_back(std::move(c.params));
  }
  probe::CorrectnessGrid grid = probe::CellCorrectness(qnets, env::ParseMazeLayout(a.layout));
  std::cout << "seeds=" << grid.seeds << " verdict=" << (grid.pass ? "pass" : "fail");
  for (int f : grid.failing) std::cout << " failing_cell=" << f;
  std::cout << "\n";
  std::ostringstream csv;
  probe::WriteCorrectnessCsv(grid, csv);
  if (!a.out.empty()) harness::WriteTextFile(a.out, csv.str());
  return 0;
}

int RunProbeAggregate(const std::string& run_dir, const std::string& out) {
  std::vector<harness::RunRecord> records;
  std::vector<fs::path> jsons;
  for (const auto& entry : fs::directory_iterator(run_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("seed_", 0) == 0 && entry.path().extension() == ".json") {
      jsons.push_back(entry.path());
    }
  }
  std::sort(jsons.begin(), jsons.end());
  for (const fs::path& p : jsons) {
    fs::path csv_path = p;
    csv_path.replace_extension(".csv");
    std::ifstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot open " + csv_path.string());
    records.push_back(harness::RecordFromJson(json::parse(harness::ReadTextFile(p.string())),
                                              harness::ReadCurveCsv(csv)));
  }
  probe::AggregatedCurve curve = probe::Aggregate(records);
  std::ostringstream csv;
  probe::WriteAggregateCsv(curve, csv);
  WriteOutput(out, csv.str());
  std::cerr << "runs=" << curve.runs << " failed=" << curve.failed_runs
            << " final_score=" << curve.final_score.mean << "\n";
  return 0;
}

// ------------------------------------------------------------ config file

// Returns the --config path given anywhere on the command line.
std::string FindConfigPath(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return argv[i + 1];
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return "";
}

bool IsExperimentCommand(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "run" || arg == "grid-search") return true;
    if (arg == "offline" || arg == "probe" || arg == "verify-theorem") return false;
  }
  return false;
}

}  // namespace

int Main(int argc, char** argv) {
  CLI::App app{"Model-based generalization experiments", "mbgen"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string config_path;
  app.add_option("--config", config_path,
                 "flat key = value file; its entries override flags");

  TheoremArgs theorem;
  CLI::App* verify = app.add_subcommand("verify-theorem", "check H_M(D) against H_B(D)");
  verify->add_flag("--extended", theorem.extended, "four-action family with a rewarding episode");
  verify->add_flag("--tabular", theorem.tabular, "random datasets on a tabular family");
  verify->add_option("--family-file", theorem.family_file, "family and dataset description");
  verify->add_option("--mdp-file", theorem.mdp_file, "solve one explicit MDP");
  verify->add_option("--tabular-datasets", theorem.tabular_datasets, "datasets for --tabular");
  verify->add_option("--seed", theorem.seed, "dataset sampling seed");
  verify->add_option("--threads", theorem.threads, "enumeration threads");
  verify->add_option("--out", theorem.out, "JSON report path (default stdout)");

  ExperimentArgs run_args;
  std::vector<std::int64_t> model_checkpoints;
  CLI::App* run = app.add_subcommand("run", "online training over many seeds");
  AddExperimentFlags(run, &run_args, true);
  run->add_option("--step-size", run_args.step_size, "Q-network step size");
  run->add_option("--temperature", run_args.temperature, "softmax temperature");
  run->add_option("--model-checkpoints", model_checkpoints,
                  "update indices at which to save the learned model")
      ->delimiter(',');

  ExperimentArgs grid_args;
  harness::GridSpec grid_spec;
  CLI::App* grid = app.add_subcommand("grid-search", "step size x temperature search");
  AddExperimentFlags(grid, &grid_args, false);
  grid->add_option("--step-sizes", grid_spec.step_sizes, "step-size grid")
      ->delimiter(',');
  grid->add_option("--temperatures", grid_spec.temperatures, "temperature grid")
      ->delimiter(',');
  grid->add_option("--max-extensions", grid_spec.max_extensions, "octave extensions per axis");

  OfflineArgs offline_args;
  CLI::App* offline = app.add_subcommand("offline", "offline maze coverage suite");
  offline->add_option("--coverage", offline_args.coverage,
                      "all-evaluation, path-to-goal, single-cell, no-evaluation or all")
      ->delimiter(',');
  offline->add_option("--agent", offline_args.agents, "model-free, 1-step, 10-step or all")
      ->delimiter(',');
  offline->add_option("--seeds", offline_args.seeds, "seeds per cell");
  offline->add_option("--first-seed", offline_args.first_seed, "first seed");
  offline->add_option("--updates", offline_args.updates, "updates per run");
  offline->add_option("--step-size", offline_args.step_size, "Q-network step size");
  offline->add_option("--temperature", offline_args.temperature, "rollout temperature");
  offline->add_option("--hidden", offline_args.hidden, "Q-network hidden widths");
  offline->add_option("--model-hidden", offline_args.model_hidden, "model hidden widths");
  offline->add_option("--layout", offline_args.layout, "verdict layout");
  offline->add_option("--jobs", offline_args.jobs, "worker threads");
  offline->add_option("--out", offline_args.out, "output directory");

  CLI::App* probe_cmd = app.add_subcommand("probe", "model and Q-network probes");
  probe_cmd->require_subcommand(1);

  SmoothingArgs smoothing_args;
  CLI::App* smoothing = probe_cmd->add_subcommand("smoothing", "reward by active-end count");
  smoothing->add_option("--model", smoothing_args.model, "dynamics model checkpoint");
  smoothing->add_flag("--ground-truth", smoothing_args.ground_truth, "probe the true dynamics");
  smoothing->add_option("--pipes", smoothing_args.pipes, "pipe count");
  smoothing->add_option("--steps", smoothing_args.steps, "probe corpus size");
  smoothing->add_flag("--disable-spontaneous", smoothing_args.disable_spontaneous,
                      "collect the corpus without spontaneous events");
  smoothing->add_option("--seed", smoothing_args.seed, "corpus seed");
  smoothing->add_option("--out", smoothing_args.out, "profile CSV (default stdout)");

  FrozenArgs frozen_args;
  CLI::App* frozen = probe_cmd->add_subcommand("frozen", "planning with frozen models");
  frozen->add_option("--ckpt-dir", frozen_args.ckpt_dir, "model checkpoint directory")
      ->required();
  frozen->add_option("--pipes", frozen_args.pipes, "pipe count");
  frozen->add_option("--regime", frozen_args.regime, "low or high");
  frozen->add_option("--scale", frozen_args.scale, "divides the environment step count");
  frozen->add_option("--seeds", frozen_args.seeds, "seeds per checkpoint");
  frozen->add_option("--first-seed", frozen_args.first_seed, "first seed");
  frozen->add_option("--threshold", frozen_args.threshold, "reward-rate target (0: 0.95/pipes)");
  frozen->add_option("--reward-bin", frozen_args.reward_bin, "active-end count to report");
  frozen->add_option("--probe-steps", frozen_args.probe_steps, "smoothing corpus size");
  frozen->add_option("--jobs", frozen_args.jobs, "worker threads");
  frozen->add_option("--out", frozen_args.out, "CSV path (default stdout)");

  CellsArgs cells_args;
  CLI::App* cells = probe_cmd->add_subcommand("cells", "per-cell greedy correctness");
  cells->add_option("--qnet-dir", cells_args.qnet_dir, "directory of q_seed_* checkpoints")
      ->required();
  cells->add_option("--layout", cells_args.layout, "lower, upper or r,c;r,c");
  cells->add_option("--out", cells_args.out, "CSV path");

  std::string aggregate_dir, aggregate_out;
  CLI::App* aggregate = probe_cmd->add_subcommand("aggregate", "mean curve of a run directory");
  aggregate->add_option("--run-dir", aggregate_dir, "directory written by run")->required();
  aggregate->add_option("--out", aggregate_out, "CSV path (default stdout)");

  // Config entries override flags: for run and grid-search they are
  // experiment keys applied after the flags; otherwise they name flags and
  // are appended to the command line.
  harness::ConfigMap file_config;
  std::vector<std::string> args(argv + 1, argv + argc);
  if (const std::string path = FindConfigPath(argc, argv); !path.empty()) {
    file_config = harness::LoadConfigFile(path);
    if (!IsExperimentCommand(argc, argv)) {
      for (const auto& [key, value] : file_config) {
        std::string flag = key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        args.push_back("--" + flag + "=" + value);
      }
      file_config.clear();
    }
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (verify->parsed()) return RunVerifyTheorem(theorem);
  if (run->parsed()) {
    harness::ExperimentConfig c = ToExperimentConfig(run_args);
    harness::ApplyConfig(file_config, &c);
    return RunRun(c, model_checkpoints);
  }
  if (grid->parsed()) {
    harness::ExperimentConfig c = ToExperimentConfig(grid_args);
    c.env = harness::TuningEnvironment(grid_args.env);
    c.env.disable_spontaneous = grid_args.disable_spontaneous;
    harness::ApplyConfig(file_config, &c);
    return RunGridSearch(c, grid_spec);
  }
  if (offline->parsed()) return RunOffline(offline_args);
  if (smoothing->parsed()) return RunProbeSmoothing(smoothing_args);
  if (frozen->parsed()) return RunProbeFrozen(frozen_args);
  if (cells->parsed()) return RunProbeCells(cells_args);
  if (aggregate->parsed()) return RunProbeAggregate(aggregate_dir, aggregate_out);
  return 1;
}

}  // namespace mbgen

int main(int argc, char** argv) {
  mbgen::ConfigureAllocator();
  try {
    return mbgen::Main(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
