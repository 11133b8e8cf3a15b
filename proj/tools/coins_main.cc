// Copyright 2026 The Coins Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: training, evaluation, the study server and the
// analysis pipeline.

#include <algorithm>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coins/agents/learner.h"
#include "coins/agents/policy.h"
#include "coins/env/task_config.h"
#include "coins/errors.h"
#include "coins/experiments/evaluate.h"
#include "coins/experiments/report.h"
#include "coins/stats/analysis.h"
#include "coins/study/config.h"
#include "coins/study/export.h"
#include "coins/study/participant.h"
#include "coins/study/server.h"
#include "coins/util/csv.h"
#include "json.hpp"

namespace coins {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Options shared by train, eval and sweep.
struct RunOptions {
  std::string config_path;
  uint64_t seed = 0;
  std::optional<int> episodes;
  std::vector<double> thetas;
  std::vector<double> epsilons;
  std::string scheme;
  std::string out = "out";
  bool print_config = false;
  int workers = 1;
  int log_episodes = 0;
};

struct RunConfig {
  TaskConfig task;
  LearnerConfig learner;
  int episodes = 100;
};

void AddRunOptions(CLI::App* app, RunOptions& o) {
  app->add_option("--config", o.config_path,
                  "JSON file with optional \"task\", \"learner\" and \"episodes\" sections")
      ->check(CLI::ExistingFile);
  app->add_option("--seed", o.seed, "master seed");
  app->add_option("--episodes", o.episodes, "evaluation episodes per point")
      ->check(CLI::PositiveNumber);
  app->add_option("--theta", o.thetas, "SVO angle(s) in degrees");
  app->add_option("--epsilon", o.epsilons, "trembling probability (or list for sweep)");
  app->add_option("--scheme", o.scheme, "reward scheme")
      ->check(CLI::IsMember({"canonical", "offset"}));
  app->add_option("--out", o.out, "output directory");
  app->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
  app->add_flag("--print-config", o.print_config, "print the effective configuration and exit");
}

void AddLogOption(CLI::App* app, RunOptions& o) {
  app->add_option("--log-episodes", o.log_episodes,
                  "write JSON-lines logs of the first N episodes of every point")
      ->check(CLI::NonNegativeNumber);
}

RunConfig ResolveConfig(const RunOptions& o, RunConfig defaults) {
  RunConfig c = std::move(defaults);
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    const json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw ConfigError("'" + o.config_path + "' is not a JSON object");
    }
    if (j.contains("task")) j.at("task").get_to(c.task);
    if (j.contains("learner")) j.at("learner").get_to(c.learner);
    if (j.contains("episodes")) c.episodes = j.at("episodes").get<int>();
  }
  if (o.episodes) c.episodes = *o.episodes;
  if (o.scheme == "canonical") c.task.scheme = RewardScheme::Canonical();
  if (o.scheme == "offset") c.task.scheme = RewardScheme::Offset();
  c.learner.workers = o.workers;
  c.task.Validate();
  c.learner.Validate();
  if (c.episodes < 1) throw ConfigError("episodes must be positive");
  return c;
}

json ConfigToJson(const RunConfig& c) {
  return {{"task", c.task}, {"learner", c.learner}, {"episodes", c.episodes}};
}

void WriteJson(const json& j, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << j.dump(2) << "\n";
}

fs::path MakeDir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw ConfigError("cannot create directory '" + dir + "'");
  return fs::path(dir);
}

void EmitAll(const EvalReport& report, const fs::path& dir, const std::string& stem) {
  EmitReport(report, ReportFormat::kCsv, (dir / (stem + ".csv")).string());
  EmitReport(report, ReportFormat::kJson, (dir / (stem + ".json")).string());
  EmitReport(report, ReportFormat::kSvg, (dir / (stem + ".svg")).string());
}

void PrintRows(const EvalReport& report) {
  for (const EvalRow& r : report.rows) {
    std::cout << r.series << " steps=" << r.steps_trained << " epsilon=" << r.epsilon
              << " collective_return=" << r.collective_return.mean << " +/- "
              << r.collective_return.ci_half_width << " coins=" << r.total_coins.mean
              << " mismatching=" << r.mismatching_coins.mean << "\n";
  }
}

std::string SeriesName(double theta) { return "theta=" + FormatDouble(theta); }

int RunTrain(const RunOptions& o, int64_t steps) {
  RunConfig defaults;
  defaults.task = TaskConfig::Training();
  RunConfig c = ResolveConfig(o, defaults);
  if (steps > 0) c.learner.total_steps = steps;
  std::vector<double> thetas = o.thetas.empty() ? std::vector<double>{0.0} : o.thetas;
  if (thetas.size() == 1) thetas.push_back(thetas[0]);
  if (thetas.size() != 2) throw ConfigError("train takes one or two --theta values");
  const double epsilon = o.epsilons.empty() ? 0.0 : o.epsilons.front();
  json printed = ConfigToJson(c);
  printed["thetas"] = thetas;
  printed["seed"] = o.seed;
  if (o.print_config) {
    std::cout << printed.dump(2) << "\n";
    return 0;
  }
  const fs::path dir = MakeDir(o.out);
  WriteJson(printed, dir / "config.json");
  std::vector<std::string> paths;
  CsvTable log;
  log.header = {"steps", "agent", "theta", "recent_env_return"};
  TrainSelfPlay(c.task, thetas, c.learner, o.seed, [&](const Checkpoint& cp) {
    const fs::path path = dir / ("checkpoint_" + std::to_string(cp.steps) + ".json");
    SaveCheckpoint(cp, path.string());
    paths.push_back(path.string());
    for (size_t i = 0; i < cp.recent_env_return.size(); ++i) {
      log.rows.push_back({std::to_string(cp.steps), std::to_string(i),
                          FormatDouble(thetas[i]), FormatDouble(cp.recent_env_return[i])});
    }
    std::cerr << "checkpoint " << cp.steps << " -> " << path.string() << "\n";
  });
  WriteCsvFile(log, (dir / "training.csv").string());
  const EvalReport report = EvaluateCheckpoints(paths, SeriesName(thetas[0]), c.task, epsilon,
                                                c.episodes, DeriveSeed(o.seed, 1), o.workers);
  EmitAll(report, dir, "curve");
  PrintRows(report);
  return 0;
}

std::vector<NamedPair> CheckpointPairs(const std::vector<std::string>& checkpoints) {
  std::vector<NamedPair> pairs;
  for (const std::string& path : checkpoints) {
    PolicySpec a;
    a.kind = PolicySpec::Kind::kLearned;
    a.checkpoint = path;
    PolicySpec b = a;
    b.agent_index = 1;
    pairs.push_back({fs::path(path).stem().string(), a, b});
  }
  return pairs;
}

std::vector<NamedPair> ScriptedPairs(const std::vector<double>& thetas) {
  std::vector<NamedPair> pairs;
  for (double theta : thetas.empty() ? std::vector<double>{0.0, 45.0} : thetas) {
    pairs.push_back(
        {SeriesName(theta), PolicySpec::Scripted(theta, 0), PolicySpec::Scripted(theta, 0)});
  }
  return pairs;
}

// Episode k of every point uses the seed EvaluatePair gives it, so the logs
// describe exactly the episodes summarized in the report.
void WriteEpisodeLogs(const std::vector<NamedPair>& pairs, const std::vector<double>& epsilons,
                      const RunConfig& c, const RunOptions& o, const fs::path& dir) {
  if (o.log_episodes <= 0) return;
  const fs::path logs = MakeDir((dir / "episodes").string());
  for (const NamedPair& pair : pairs) {
    for (double eps : epsilons) {
      PolicySpec a = pair.a, b = pair.b;
      a.tremble.epsilon = b.tremble.epsilon = eps;
      std::string name = pair.name + "_eps=" + FormatDouble(eps) + ".jsonl";
      std::replace(name.begin(), name.end(), '/', '_');
      LogEpisodes(Agent::FromSpec(a), Agent::FromSpec(b), c.task,
                  std::min(o.log_episodes, c.episodes), o.seed, (logs / name).string());
    }
  }
}

int RunEval(const RunOptions& o, const std::vector<std::string>& checkpoints,
            const std::string& series) {
  RunConfig defaults;
  defaults.task = TaskConfig::Coplay();
  const RunConfig c = ResolveConfig(o, defaults);
  const double epsilon = o.epsilons.empty() ? 0.0 : o.epsilons.front();
  if (o.print_config) {
    std::cout << ConfigToJson(c).dump(2) << "\n";
    return 0;
  }
  EvalReport report;
  std::vector<NamedPair> pairs;
  if (!checkpoints.empty()) {
    report = EvaluateCheckpoints(checkpoints, series.empty() ? "learned" : series, c.task,
                                 epsilon, c.episodes, o.seed, o.workers);
    pairs = CheckpointPairs(checkpoints);
  } else {
    pairs = ScriptedPairs(o.thetas);
    report = EpsilonSweep(pairs, c.task, {epsilon}, c.episodes, o.seed, o.workers);
  }
  const fs::path dir = MakeDir(o.out);
  EmitAll(report, dir, "eval");
  WriteEpisodeLogs(pairs, {epsilon}, c, o, dir);
  PrintRows(report);
  return 0;
}

int RunSweep(const RunOptions& o, const std::vector<std::string>& checkpoints) {
  RunConfig defaults;
  defaults.task = TaskConfig::Coplay();
  const RunConfig c = ResolveConfig(o, defaults);
  const std::vector<double> eps = o.epsilons.empty() ? kDefaultEpsilons : o.epsilons;
  if (o.print_config) {
    json j = ConfigToJson(c);
    j["epsilons"] = eps;
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  const std::vector<NamedPair> pairs =
      checkpoints.empty() ? ScriptedPairs(o.thetas) : CheckpointPairs(checkpoints);
  const EvalReport report = EpsilonSweep(pairs, c.task, eps, c.episodes, o.seed, o.workers);
  const fs::path dir = MakeDir(o.out);
  EmitAll(report, dir, "sweep");
  WriteEpisodeLogs(pairs, eps, c, o, dir);
  PrintRows(report);
  return 0;
}

struct ServeOptions {
  int study = 1;
  std::string roster;
  int port = 8080;
  std::string address = "0.0.0.0";
  std::string log_dir = "logs";
  std::string static_dir;
  uint64_t seed = 0;
  int threads = 2;
  int tick_ms = 0;
  bool print_config = false;
};

StudyConfig ResolveStudy(int study, const std::string& roster_path) {
  const StudyVariant v = VariantFromNumber(study);
  return roster_path.empty() ? StudyConfig::ForVariant(v)
                             : StudyConfig::ForVariant(v, LoadRoster(roster_path));
}

int RunServe(const ServeOptions& o) {
  const StudyConfig config = ResolveStudy(o.study, o.roster);
  config.Validate();
  if (o.print_config) {
    std::cout << json(config).dump(2) << "\n";
    return 0;
  }
  ServerOptions so;
  so.address = o.address;
  so.port = static_cast<uint16_t>(o.port);
  so.log_dir = o.log_dir;
  so.static_dir = o.static_dir;
  so.seed = o.seed;
  so.threads = o.threads;
  so.tick_period = std::chrono::milliseconds(o.tick_ms);

  // Block the shutdown signals before the worker threads start so that only
  // sigwait below sees them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  StudyServer server(config, so);
  const uint16_t port = server.Start();
  std::cout << "serving " << VariantName(config.variant) << " on " << o.address << ":" << port
            << " (logs in " << o.log_dir << ")" << std::endl;
  int received = 0;
  sigwait(&signals, &received);
  std::cout << "shutting down after signal " << received << " with " << server.session_count()
            << " session(s)" << std::endl;
  server.Stop();
  return 0;
}

}  // namespace
}  // namespace coins

int main(int argc, char** argv) {
  using namespace coins;
  CLI::App app{"Coins: mixed-motive gridworld agents, study server and analysis"};
  app.require_subcommand(1);

  RunOptions train_opts, eval_opts, sweep_opts;
  int64_t train_steps = 0;
  CLI::App* train = app.add_subcommand("train", "self-play A2C training with SVO utilities");
  AddRunOptions(train, train_opts);
  train->add_option("--steps", train_steps, "override learner.total_steps");

  std::vector<std::string> eval_checkpoints, sweep_checkpoints;
  std::string eval_series;
  CLI::App* eval = app.add_subcommand("eval", "evaluate checkpoints or scripted pairs");
  AddRunOptions(eval, eval_opts);
  AddLogOption(eval, eval_opts);
  eval->add_option("--checkpoint", eval_checkpoints, "checkpoint file(s), one row each")
      ->check(CLI::ExistingFile);
  eval->add_option("--series", eval_series, "series name for checkpoint rows");

  CLI::App* sweep = app.add_subcommand("sweep", "trembling-hand sweep over epsilon");
  AddRunOptions(sweep, sweep_opts);
  AddLogOption(sweep, sweep_opts);
  sweep->add_option("--checkpoint", sweep_checkpoints, "checkpoint file(s); one pair each")
      ->check(CLI::ExistingFile);

  ServeOptions serve_opts;
  CLI::App* serve = app.add_subcommand("serve", "run the study server");
  serve->add_option("--study", serve_opts.study, "study variant")->check(CLI::Range(1, 3));
  serve->add_option("--roster", serve_opts.roster, "roster JSON file")->check(CLI::ExistingFile);
  serve->add_option("--port", serve_opts.port, "TCP port (0 picks one)")->check(CLI::Range(0, 65535));
  serve->add_option("--address", serve_opts.address, "bind address");
  serve->add_option("--log-dir", serve_opts.log_dir, "session log directory");
  serve->add_option("--static-dir", serve_opts.static_dir, "web client bundle directory");
  serve->add_option("--seed", serve_opts.seed, "master seed for session seeds");
  serve->add_option("--threads", serve_opts.threads, "I/O threads")->check(CLI::PositiveNumber);
  serve->add_option("--tick-ms", serve_opts.tick_ms, "tick period override in milliseconds");
  serve->add_flag("--print-config", serve_opts.print_config, "print the study config and exit");

  std::string export_logs = "logs", export_out = "tables";
  CLI::App* exp = app.add_subcommand("export", "flatten session logs into CSV tables");
  exp->add_option("--log-dir", export_logs, "session log directory");
  exp->add_option("--out", export_out, "output directory");

  std::string analyze_tables = "tables", analyze_out = "analysis";
  int analyze_study = 1;
  CLI::App* analyze = app.add_subcommand("analyze", "perception, reliability and preference models");
  analyze->add_option("--tables", analyze_tables, "directory written by export")
      ->check(CLI::ExistingDirectory);
  analyze->add_option("--study", analyze_study, "study variant")->check(CLI::Range(1, 3));
  analyze->add_option("--out", analyze_out, "output directory");

  int sim_study = 1, sim_sessions = 10;
  uint64_t sim_seed = 0;
  std::string sim_logs = "logs", sim_roster;
  CLI::App* simulate = app.add_subcommand("simulate", "write logs of scripted synthetic participants");
  simulate->add_option("--study", sim_study, "study variant")->check(CLI::Range(1, 3));
  simulate->add_option("--sessions", sim_sessions, "number of sessions")->check(CLI::NonNegativeNumber);
  simulate->add_option("--seed", sim_seed, "master seed");
  simulate->add_option("--log-dir", sim_logs, "session log directory");
  simulate->add_option("--roster", sim_roster, "roster JSON file")->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) return RunTrain(train_opts, train_steps);
    if (*eval) return RunEval(eval_opts, eval_checkpoints, eval_series);
    if (*sweep) return RunSweep(sweep_opts, sweep_checkpoints);
    if (*serve) return RunServe(serve_opts);
    if (*exp) {
      const StudyTables t = ExportSessions(export_logs);
      WriteStudyTables(t, export_out);
      std::cout << "exported " << t.sessions.rows.size() << " session(s) to " << export_out
                << "\n";
      return 0;
    }
    if (*analyze) {
      const StudyAnalysis a =
          AnalyzeStudy(ReadStudyTables(analyze_tables), VariantFromNumber(analyze_study));
      WriteAnalysis(a, analyze_out);
      for (const ModelComparisonRow& r : a.ranking) {
        std::cout << r.rank << ". " << r.name << " AIC=" << r.aic << " " << r.pseudo_r2_name
                  << "=" << r.pseudo_r2 << "\n";
      }
      for (const std::string& n : a.notes) std::cout << "note: " << n << "\n";
      return 0;
    }
    if (*simulate) {
      const auto ids = SimulateStudy(ResolveStudy(sim_study, sim_roster), sim_sessions, sim_seed,
                                     sim_logs);
      std::cout << "wrote " << ids.size() << " session log(s) to " << sim_logs << "\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
