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

// Python bindings for the coins core. Structured values cross the boundary as
// plain dicts and lists with the same field names as the JSON files the
// command-line tool writes.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "coins/agents/learner.h"
#include "coins/agents/policy.h"
#include "coins/agents/svo.h"
#include "coins/agents/tremble.h"
#include "coins/env/episode_log.h"
#include "coins/env/game.h"
#include "coins/errors.h"
#include "coins/experiments/evaluate.h"
#include "coins/experiments/report.h"
#include "coins/stats/analysis.h"
#include "coins/stats/anova.h"
#include "coins/stats/descriptive.h"
#include "coins/stats/glm.h"
#include "coins/study/bonus.h"
#include "coins/study/config.h"
#include "coins/study/export.h"
#include "coins/study/participant.h"
#include "coins/study/server.h"
#include "coins/study/session.h"
#include "json.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace coins {
namespace {

py::object ToPy(const json& j) {
  static auto* loads = new py::object(py::module_::import("json").attr("loads"));
  return (*loads)(j.dump());
}

json FromPy(const py::handle& obj) {
  static auto* dumps = new py::object(py::module_::import("json").attr("dumps"));
  if (obj.is_none()) return json::object();
  return json::parse((*dumps)(obj).cast<std::string>());
}

py::list ToPyList(const std::vector<json>& messages) {
  py::list out;
  for (const json& m : messages) out.append(ToPy(m));
  return out;
}

Action ActionFrom(const py::handle& a) {
  if (py::isinstance<py::int_>(a)) {
    const int i = a.cast<int>();
    if (i < 0 || i >= kNumActions) throw ValidationError("action index out of range");
    return static_cast<Action>(i);
  }
  const std::string name = a.cast<std::string>();
  const auto parsed = ParseAction(name);
  if (!parsed) throw ValidationError("unknown action '" + name + "'");
  return *parsed;
}

Color ColorFrom(const std::string& name) {
  const auto c = ParseColor(name);
  if (!c) throw ValidationError("unknown color '" + name + "'");
  return *c;
}

TaskConfig TaskFrom(const py::handle& overrides, const std::string& preset) {
  TaskConfig c;
  if (preset == "coplay") {
    c = TaskConfig::Coplay();
  } else if (preset == "training") {
    c = TaskConfig::Training();
  } else if (preset == "tutorial") {
    c = TaskConfig::Tutorial();
  } else {
    throw ConfigError("unknown task preset '" + preset + "'");
  }
  json j = c;
  j.merge_patch(FromPy(overrides));
  TaskConfig merged = j.get<TaskConfig>();
  merged.Validate();
  return merged;
}

json SummaryJson(const MetricSummary& s) {
  return {{"mean", s.mean}, {"sd", s.sd}, {"ci_half_width", s.ci_half_width},
          {"lower", s.lower()}, {"upper", s.upper()}, {"n", s.n}};
}

json PairJson(const PairMetrics& m) {
  json episodes = json::array();
  for (const EpisodeMetrics& e : m.episodes) {
    episodes.push_back({{"total_coins", e.total_coins},
                        {"matching_coins", e.matching_coins},
                        {"mismatching_coins", e.mismatching_coins},
                        {"collective_return", e.collective_return},
                        {"player_returns", e.player_returns}});
  }
  return {{"episodes", episodes},
          {"total_coins", SummaryJson(m.total_coins)},
          {"mismatching_coins", SummaryJson(m.mismatching_coins)},
          {"collective_return", SummaryJson(m.collective_return)}};
}

StudyConfig StudyFrom(int study, const py::handle& overrides) {
  json j = StudyConfig::ForVariant(VariantFromNumber(study));
  j.merge_patch(FromPy(overrides));
  StudyConfig c = j.get<StudyConfig>();
  c.Validate();
  return c;
}

GlmOptions Options(const std::optional<std::vector<std::string>>& names) {
  GlmOptions o;
  if (names) o.names = *names;
  return o;
}

class PyGame {
 public:
  PyGame(const py::handle& config, uint64_t seed,
         const std::optional<std::pair<std::string, std::string>>& colors, const std::string& preset)
      : config_(TaskFrom(config, preset)), seed_(seed) {
    std::optional<std::pair<Color, Color>> c;
    if (colors) c = std::make_pair(ColorFrom(colors->first), ColorFrom(colors->second));
    state_ = GenerateRoom(config_, seed, c);
  }

  py::object StepJoint(const py::sequence& actions) {
    std::vector<Action> joint;
    for (const py::handle& a : actions) joint.push_back(ActionFrom(a));
    if (static_cast<int>(joint.size()) != state_.num_players()) {
      throw ValidationError("expected one action per player");
    }
    const StepOutcome out = Step(state_, joint, config_);
    return ToPy(StepRecord(state_, joint, out));
  }

  void SetCoin(int row, int col, const std::optional<std::string>& color) {
    std::optional<Color> c;
    if (color) c = ColorFrom(*color);
    state_.SetCoin({row, col}, c);
  }

  void SetPlayers(const std::vector<std::pair<int, int>>& positions) {
    std::vector<Position> p;
    for (const auto& [r, c] : positions) p.push_back({r, c});
    state_.SetPlayerPositions(p);
  }

  py::object Snapshot() const {
    json j = RoomSnapshot(state_, config_, seed_);
    j["step"] = state_.step_index();
    j["scores"] = state_.cumulative_score();
    return ToPy(j);
  }

  const GameState& state() const { return state_; }

 private:
  TaskConfig config_;
  uint64_t seed_;
  GameState state_;
};

class PySession {
 public:
  explicit PySession(SessionInit init) : session_(std::move(init)) {}

  py::list Handle(const py::handle& message) {
    const ClientEvent e = ParseClientMessage(FromPy(message).dump());
    return ToPyList(session_.Handle(e));
  }
  py::list Tick() { return ToPyList(session_.Handle({"tick", json::object()})); }
  py::list View() const { return ToPyList(session_.CurrentView()); }
  const Session& session() const { return session_; }

 private:
  Session session_;
};

}  // namespace
}  // namespace coins

PYBIND11_MODULE(_coins, m) {
  using namespace coins;
  m.doc() = "Coins: a mixed-motive gridworld, social value orientation agents and study tooling.";

  static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
  static py::exception<ValidationError> validation_error(m, "ValidationError", PyExc_ValueError);
  static py::exception<ProtocolError> protocol_error(m, "ProtocolError", PyExc_RuntimeError);
  static py::exception<NumericalError> numerical_error(m, "NumericalError", PyExc_ArithmeticError);
  static py::exception<SeparationError> separation_error(m, "SeparationError",
                                                         numerical_error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      py::set_error(config_error, e.what());
    } catch (const ValidationError& e) {
      py::set_error(validation_error, e.what());
    } catch (const ProtocolError& e) {
      py::set_error(protocol_error, e.what());
    } catch (const SeparationError& e) {
      py::set_error(separation_error, e.what());
    } catch (const NumericalError& e) {
      py::set_error(numerical_error, e.what());
    } catch (const json::exception& e) {
      py::set_error(validation_error, e.what());
    }
  });

  m.attr("PROTOCOL_VERSION") = kProtocolVersion;
  m.attr("ACTIONS") = py::make_tuple("no_op", "move_up", "move_down", "move_left", "move_right");

  // -- environment -----------------------------------------------------------

  m.def(
      "reward_scheme",
      [](const std::string& name) {
        const auto s = SchemeByName(name);
        if (!s) throw ConfigError("unknown reward scheme '" + name + "'");
        return ToPy({{"name", std::string(SchemeName(s->name))},
                     {"matching", {{"self", s->matching.self}, {"other", s->matching.other}}},
                     {"mismatching",
                      {{"self", s->mismatching.self}, {"other", s->mismatching.other}}}});
      },
      py::arg("name"));
  m.def(
      "task_config",
      [](const py::object& overrides, const std::string& preset) {
        return ToPy(json(TaskFrom(overrides, preset)));
      },
      py::arg("overrides") = py::none(), py::arg("preset") = "coplay");

  py::class_<PyGame>(m, "Game")
      .def(py::init<const py::handle&, uint64_t,
                    const std::optional<std::pair<std::string, std::string>>&, const std::string&>(),
           py::arg("config") = py::none(), py::arg("seed") = 0, py::arg("colors") = py::none(),
           py::arg("preset") = "coplay")
      .def("step", &PyGame::StepJoint, py::arg("actions"))
      .def("set_coin", &PyGame::SetCoin, py::arg("row"), py::arg("col"), py::arg("color"))
      .def("set_player_positions", &PyGame::SetPlayers, py::arg("positions"))
      .def("snapshot", &PyGame::Snapshot)
      .def_property_readonly("rows", [](const PyGame& g) { return g.state().rows(); })
      .def_property_readonly("cols", [](const PyGame& g) { return g.state().cols(); })
      .def_property_readonly("step_index", [](const PyGame& g) { return g.state().step_index(); })
      .def_property_readonly("terminal", [](const PyGame& g) { return g.state().terminal(); })
      .def_property_readonly("scores",
                             [](const PyGame& g) { return g.state().cumulative_score(); })
      .def_property_readonly("coins_on_grid",
                             [](const PyGame& g) { return g.state().coins_on_grid(); });

  // -- agents ----------------------------------------------------------------

  m.def(
      "svo_utility",
      [](double r_self, const std::vector<double>& r_others, double theta) {
        return SvoUtility(r_self, r_others, theta);
      },
      py::arg("r_self"), py::arg("r_others"), py::arg("theta"));
  m.def(
      "tremble",
      [](const py::handle& action, double epsilon, int n, uint64_t seed) {
        if (epsilon < 0 || epsilon > 1) throw ConfigError("epsilon must lie in [0, 1]");
        const Action a = ActionFrom(action);
        Rng rng(seed);
        std::vector<std::string> out;
        out.reserve(n);
        for (int i = 0; i < n; ++i) out.emplace_back(ActionName(Tremble(a, {epsilon}, rng)));
        return out;
      },
      py::arg("action"), py::arg("epsilon"), py::arg("n") = 1, py::arg("seed") = 0);
  m.def(
      "train",
      [](const py::object& task, const std::vector<double>& thetas, const py::object& learner,
         uint64_t seed, const std::string& out_dir, const std::string& preset) {
        const TaskConfig t = TaskFrom(task, preset);
        json lj = LearnerConfig();
        lj.merge_patch(FromPy(learner));
        const LearnerConfig l = lj.get<LearnerConfig>();
        l.Validate();
        if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
        std::vector<Checkpoint> checkpoints;
        {
          py::gil_scoped_release release;
          checkpoints = TrainSelfPlay(t, thetas, l, seed);
        }
        json out = json::array();
        for (const Checkpoint& c : checkpoints) {
          json row = {{"steps", c.steps}, {"recent_env_return", c.recent_env_return}};
          if (!out_dir.empty()) {
            const std::string path =
                (std::filesystem::path(out_dir) / ("checkpoint_" + std::to_string(c.steps) + ".json"))
                    .string();
            SaveCheckpoint(c, path);
            row["path"] = path;
          }
          out.push_back(row);
        }
        return ToPy(out);
      },
      py::arg("task") = py::none(), py::arg("thetas") = std::vector<double>{0.0, 0.0},
      py::arg("learner") = py::none(), py::arg("seed") = 0, py::arg("out_dir") = "",
      py::arg("preset") = "training");

  // -- experiments -----------------------------------------------------------

  m.def(
      "evaluate_pair",
      [](const py::object& a, const py::object& b, const py::object& config, int episodes,
         uint64_t seed, int workers, const std::string& preset) {
        const Agent pa = Agent::FromSpec(FromPy(a).get<PolicySpec>());
        const Agent pb = Agent::FromSpec(FromPy(b).get<PolicySpec>());
        const TaskConfig c = TaskFrom(config, preset);
        PairMetrics m;
        {
          py::gil_scoped_release release;
          m = EvaluatePair(pa, pb, c, episodes, seed, workers);
        }
        return ToPy(PairJson(m));
      },
      py::arg("a"), py::arg("b"), py::arg("config") = py::none(), py::arg("episodes") = 100,
      py::arg("seed") = 0, py::arg("workers") = 1, py::arg("preset") = "coplay");
  m.def(
      "epsilon_sweep",
      [](const py::object& pairs, const py::object& config, const std::vector<double>& epsilons,
         int episodes, uint64_t seed, int workers, const std::string& preset) {
        std::vector<NamedPair> named;
        for (const json& p : FromPy(pairs)) {
          named.push_back({p.at("name").get<std::string>(), p.at("a").get<PolicySpec>(),
                           p.at("b").get<PolicySpec>()});
        }
        const TaskConfig c = TaskFrom(config, preset);
        EvalReport r;
        {
          py::gil_scoped_release release;
          r = EpsilonSweep(named, c, epsilons, episodes, seed, workers);
        }
        return ToPy(ReportToJson(r));
      },
      py::arg("pairs"), py::arg("config") = py::none(),
      py::arg("epsilons") = kDefaultEpsilons, py::arg("episodes") = 100, py::arg("seed") = 0,
      py::arg("workers") = 1, py::arg("preset") = "coplay");

  // -- study -----------------------------------------------------------------

  m.def(
      "study_config",
      [](int study, const py::object& overrides) {
        return ToPy(json(StudyFrom(study, overrides)));
      },
      py::arg("study"), py::arg("overrides") = py::none());
  m.def("bonus_cents", &BonusCents, py::arg("points"), py::arg("bonus_per_point"));
  m.def("format_dollars", &FormatDollars, py::arg("cents"));

  py::class_<PySession>(m, "Session")
      .def(py::init([](int study, uint64_t seed, const std::string& session_id,
                       const std::string& participant_id, const py::object& overrides) {
             return PySession(
                 SessionInit{session_id, participant_id, StudyFrom(study, overrides), seed, ""});
           }),
           py::arg("study"), py::arg("seed") = 0, py::arg("session_id") = "local",
           py::arg("participant_id") = "local", py::arg("config") = py::none())
      .def("handle", &PySession::Handle, py::arg("message"))
      .def("tick", &PySession::Tick)
      .def("view", &PySession::View)
      .def("snapshot", [](const PySession& s) { return ToPy(s.session().Snapshot()); })
      .def_property_readonly("phase",
                             [](const PySession& s) { return PhaseName(s.session().phase()); })
      .def_property_readonly("live", [](const PySession& s) { return s.session().live(); })
      .def_property_readonly("complete",
                             [](const PySession& s) { return s.session().complete(); })
      .def_property_readonly("coplay_points",
                             [](const PySession& s) { return s.session().coplay_points(); })
      .def_property_readonly("bonus_cents",
                             [](const PySession& s) { return s.session().bonus_cents(); });

  py::class_<ScriptedParticipant>(m, "ScriptedParticipant")
      .def(py::init([](uint64_t seed, const std::string& choice) {
             ScriptedParticipant::Options o;
             o.choice_override = choice;
             return ScriptedParticipant(seed, o);
           }),
           py::arg("seed") = 0, py::arg("choice") = "")
      .def("hello", [](const ScriptedParticipant& p) { return ToPy(p.Hello()); })
      .def(
          "on_message",
          [](ScriptedParticipant& p, const py::object& message) {
            return ToPyList(p.OnMessage(FromPy(message)));
          },
          py::arg("message"))
      .def_property_readonly("finished", &ScriptedParticipant::finished)
      .def_property_readonly("bonus_cents", &ScriptedParticipant::bonus_cents);

  m.def(
      "simulate_study",
      [](int study, int sessions, uint64_t seed, const std::string& log_dir,
         const py::object& overrides) {
        const StudyConfig c = StudyFrom(study, overrides);
        py::gil_scoped_release release;
        return SimulateStudy(c, sessions, seed, log_dir);
      },
      py::arg("study"), py::arg("sessions"), py::arg("seed"), py::arg("log_dir"),
      py::arg("config") = py::none());
  m.def(
      "export_sessions",
      [](const std::string& log_dir, const std::string& out_dir) {
        py::gil_scoped_release release;
        const StudyTables t = ExportSessions(log_dir);
        WriteStudyTables(t, out_dir);
        return t.ratings.rows.size();
      },
      py::arg("log_dir"), py::arg("out_dir"));
  m.def(
      "analyze",
      [](const std::string& tables_dir, int study, const std::string& out_dir) {
        StudyAnalysis a;
        {
          py::gil_scoped_release release;
          a = AnalyzeStudy(ReadStudyTables(tables_dir), VariantFromNumber(study));
          if (!out_dir.empty()) WriteAnalysis(a, out_dir);
        }
        return ToPy(AnalysisToJson(a));
      },
      py::arg("tables_dir"), py::arg("study"), py::arg("out_dir") = "");

  py::class_<StudyServer>(m, "StudyServer")
      .def(py::init([](int study, const std::string& log_dir, const std::string& static_dir,
                       const std::string& address, uint16_t port, uint64_t seed, int tick_ms,
                       const py::object& overrides) {
             ServerOptions o;
             o.address = address;
             o.port = port;
             o.log_dir = log_dir;
             o.static_dir = static_dir;
             o.seed = seed;
             o.tick_period = std::chrono::milliseconds(tick_ms);
             return std::make_unique<StudyServer>(StudyFrom(study, overrides), o);
           }),
           py::arg("study"), py::arg("log_dir"), py::arg("static_dir") = "",
           py::arg("address") = "127.0.0.1", py::arg("port") = 0, py::arg("seed") = 0,
           py::arg("tick_ms") = 0, py::arg("config") = py::none())
      .def("start", &StudyServer::Start, py::call_guard<py::gil_scoped_release>())
      .def("stop", &StudyServer::Stop, py::call_guard<py::gil_scoped_release>())
      .def_property_readonly("session_count", &StudyServer::session_count);

  // -- statistics ------------------------------------------------------------

  m.def(
      "fit_logistic",
      [](const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
         const std::optional<std::vector<std::string>>& names) {
        return ToPy(ModelFitToJson(FitLogistic(x, y, Options(names))));
      },
      py::arg("x"), py::arg("y"), py::arg("names") = py::none());
  m.def(
      "fit_fractional_logit",
      [](const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
         const std::optional<std::vector<std::string>>& names) {
        return ToPy(ModelFitToJson(FitFractionalLogit(x, y, Options(names))));
      },
      py::arg("x"), py::arg("y"), py::arg("names") = py::none());
  m.def(
      "fit_linear",
      [](const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
         const std::optional<std::vector<std::string>>& names) {
        return ToPy(ModelFitToJson(FitLinear(x, y, Options(names))));
      },
      py::arg("x"), py::arg("y"), py::arg("names") = py::none());
  m.def(
      "compare_models",
      [](const std::vector<std::tuple<std::string, int, double>>& fits) {
        std::vector<std::pair<std::string, ModelFit>> in;
        for (const auto& [name, k, loglik] : fits) {
          ModelFit f;
          f.k = k;
          f.loglik = loglik;
          in.emplace_back(name, f);
        }
        json out = json::array();
        for (const ModelComparisonRow& r : CompareModels(in)) {
          out.push_back({{"name", r.name}, {"k", r.k}, {"loglik", r.loglik}, {"aic", r.aic},
                         {"delta_aic", r.delta_aic}, {"rank", r.rank}});
        }
        return ToPy(out);
      },
      py::arg("fits"), "Ranks (name, k, loglik) triples by AIC.");
  m.def(
      "icc", [](const std::vector<std::vector<double>>& groups) { return ToPy(IccToJson(Icc(groups))); },
      py::arg("groups"));
  m.def(
      "one_way_anova",
      [](const std::vector<double>& values, const std::vector<std::string>& group,
         const std::string& name) { return ToPy(AnovaToJson(OneWayAnova(values, group, name))); },
      py::arg("values"), py::arg("group"), py::arg("name") = "group");
  m.def(
      "two_way_anova",
      [](const std::vector<double>& values, const std::vector<std::string>& a,
         const std::vector<std::string>& b, const std::string& name_a, const std::string& name_b) {
        return ToPy(AnovaToJson(TwoWayAnova(values, a, b, name_a, name_b)));
      },
      py::arg("values"), py::arg("a"), py::arg("b"), py::arg("name_a") = "a",
      py::arg("name_b") = "b");
  m.def("spearman_brown", &SpearmanBrown, py::arg("r"));
  m.def("spearman_brown_inverse", &SpearmanBrownInverse, py::arg("rho"));
  m.def("likert_to_unit", &LikertToUnit, py::arg("value"));
}
