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

#include "coins/stats/analysis.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>

#include "coins/errors.h"
#include "coins/stats/descriptive.h"
#include "coins/util/csv.h"

namespace coins {
namespace {

using nlohmann::json;

struct AgentParams {
  double theta = 0.0;
  double epsilon = 0.0;
};

// (session, episode) keyed lookups.
using EpisodeKey = std::pair<std::string, int>;

std::vector<size_t> RowsOf(const CsvTable& t, const std::string& study) {
  std::vector<size_t> rows;
  for (size_t i = 0; i < t.rows.size(); ++i) {
    if (t.Get(i, "study") == study) rows.push_back(i);
  }
  return rows;
}

int Int(const std::string& s) {
  size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw ValidationError("expected an integer, got '" + s + "'");
  return v;
}

double Ci95(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = Mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return 1.959963984540054 * std::sqrt(ss / (xs.size() - 1)) / std::sqrt(double(xs.size()));
}

// Identity columns: +1 for the second co-player, -1 for the first, with the
// alphabetically first label as reference.
std::vector<std::string> IdentityLabels(const std::map<std::string, AgentParams>& agents) {
  std::vector<std::string> labels;
  for (const auto& [label, agent] : agents) labels.push_back(label);
  if (!labels.empty()) labels.erase(labels.begin());
  return labels;
}

template <typename Fn>
void Attempt(std::vector<std::string>& notes, const std::string& what, Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    notes.push_back(what + ": " + e.what());
  }
}

struct DesignRow {
  std::vector<double> identity;
  double score = 0.0;
  double warmth = 0.0;
  double competence = 0.0;
  double y = 0.0;
};

void FitModels(const std::vector<DesignRow>& rows, const std::vector<std::string>& id_labels,
               bool fractional, StudyAnalysis& out) {
  if (rows.empty()) {
    out.notes.push_back("models: no complete observations");
    return;
  }
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = rows[i].y;
  auto fit = [&](const std::string& name, const std::vector<std::string>& terms,
                 const std::function<void(const DesignRow&, double*)>& fill) {
    Attempt(out.notes, "model " + name, [&] {
      std::vector<std::string> names = {"intercept"};
      names.insert(names.end(), terms.begin(), terms.end());
      Eigen::MatrixXd x(n, static_cast<Eigen::Index>(names.size()));
      std::vector<double> buffer(names.size() - 1);
      for (Eigen::Index i = 0; i < n; ++i) {
        fill(rows[i], buffer.data());
        x(i, 0) = 1.0;
        for (size_t j = 0; j < buffer.size(); ++j) x(i, j + 1) = buffer[j];
      }
      GlmOptions o;
      o.names = names;
      out.models.emplace_back(name, fractional ? FitFractionalLogit(x, y, o) : FitLogistic(x, y, o));
    });
  };
  std::vector<std::string> id_terms;
  for (const std::string& l : id_labels) id_terms.push_back("identity_" + l);
  const std::string prefix = fractional ? "_diff" : "";
  fit("identity", id_terms, [](const DesignRow& r, double* v) {
    std::copy(r.identity.begin(), r.identity.end(), v);
  });
  fit("score", {"score" + prefix}, [](const DesignRow& r, double* v) { v[0] = r.score; });
  fit("perception", {"warmth" + prefix, "competence" + prefix}, [](const DesignRow& r, double* v) {
    v[0] = r.warmth;
    v[1] = r.competence;
  });
  std::vector<std::pair<std::string, ModelFit>> ranked(out.models.begin(), out.models.end());
  fit("combined", {"score" + prefix, "warmth" + prefix, "competence" + prefix},
      [](const DesignRow& r, double* v) {
        v[0] = r.score;
        v[1] = r.warmth;
        v[2] = r.competence;
      });
  out.ranking = CompareModels(ranked);
}

}  // namespace

StudyAnalysis AnalyzeStudy(const StudyTables& tables, StudyVariant study) {
  StudyAnalysis out;
  out.study = study;
  const std::string sid = std::to_string(static_cast<int>(study));
  out.notes.push_back(
      "ANOVAs and regressions pool all rows as independent observations (fixed effects); "
      "repeated measures within participants are not modelled");

  std::set<std::string> sessions;
  for (size_t i : RowsOf(tables.sessions, sid)) sessions.insert(tables.sessions.Get(i, "session_id"));
  out.sessions = static_cast<int>(sessions.size());

  // Ratings and the agents they refer to.
  std::map<std::string, AgentParams> agents;
  std::vector<Rating> ratings;
  for (size_t i : RowsOf(tables.ratings, sid)) {
    const CsvTable& t = tables.ratings;
    Rating r;
    r.participant = t.Get(i, "session_id");
    r.co_player = t.Get(i, "co_player");
    r.repetition = Int(t.Get(i, "repetition"));
    r.trait = t.Get(i, "trait");
    r.value = Int(t.Get(i, "value"));
    r.episode = Int(t.Get(i, "episode"));
    agents[r.co_player] = {ParseDouble(t.Get(i, "theta")), ParseDouble(t.Get(i, "epsilon"))};
    ratings.push_back(r);
  }
  out.composites = Composite(ratings);
  for (const RatingKey& k : out.composites.excluded) {
    out.notes.push_back("excluded incomplete rating set: " + k.participant + " / " + k.co_player +
                        " / repetition " + std::to_string(k.repetition));
  }

  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_agent;
  for (const CompositeScore& c : out.composites.scores) {
    by_agent[c.co_player].first.push_back(c.warmth);
    by_agent[c.co_player].second.push_back(c.competence);
  }
  for (const auto& [label, wc] : by_agent) {
    out.coplayers.push_back({label, agents[label].theta, agents[label].epsilon,
                             static_cast<int>(wc.first.size()), Mean(wc.first), Ci95(wc.first),
                             Mean(wc.second), Ci95(wc.second)});
  }

  // Consistency across repeated ratings of the same co-player.
  std::map<std::string, std::map<std::pair<std::string, std::string>, std::vector<double>>> items;
  std::vector<double> all_values;
  std::vector<std::string> all_traits;
  for (const Rating& r : ratings) {
    items[r.trait][{r.participant, r.co_player}].push_back(r.value);
    all_values.push_back(r.value);
    all_traits.push_back(r.trait);
  }
  for (const auto& [trait, targets] : items) {
    Attempt(out.notes, "icc " + trait, [&] {
      std::vector<std::vector<double>> groups;
      for (const auto& [key, values] : targets) groups.push_back(values);
      out.icc[trait] = Icc(groups);
    });
  }
  Attempt(out.notes, "trait anova",
          [&] { out.trait_anova = OneWayAnova(all_values, all_traits, "trait"); });

  // Two-item composite reliability.
  std::map<RatingKey, std::map<std::string, double>> sets;
  for (const Rating& r : ratings) sets[{r.participant, r.co_player, r.repetition}][r.trait] = r.value;
  const std::map<std::string, std::pair<std::string, std::string>> kComposites = {
      {"warmth", {"warm", "well_intentioned"}}, {"competence", {"competent", "intelligent"}}};
  for (const auto& [name, pair] : kComposites) {
    Attempt(out.notes, "reliability " + name, [&] {
      std::vector<double> a, b;
      for (const auto& [key, values] : sets) {
        if (values.contains(pair.first) && values.contains(pair.second)) {
          a.push_back(values.at(pair.first));
          b.push_back(values.at(pair.second));
        }
      }
      out.reliability[name] = SpearmanBrown(PearsonCorrelation(a, b));
    });
  }

  // Algorithmic components against perceived warmth and competence.
  for (const char* name : {"warmth", "competence"}) {
    Attempt(out.notes, std::string("svo x tremble anova ") + name, [&] {
      std::vector<double> v;
      std::vector<std::string> a, b;
      for (const CompositeScore& c : out.composites.scores) {
        v.push_back(std::string(name) == "warmth" ? c.warmth : c.competence);
        a.push_back(FormatDouble(agents[c.co_player].theta));
        b.push_back(FormatDouble(agents[c.co_player].epsilon));
      }
      out.svo_tremble_anova[name] = TwoWayAnova(v, a, b, "theta", "epsilon");
    });
  }

  // Lookups for the preference models.
  std::map<EpisodeKey, const CompositeScore*> composite_of;
  for (const CompositeScore& c : out.composites.scores) {
    composite_of[{c.participant, c.episode}] = &c;
  }
  std::map<EpisodeKey, int> points;
  std::map<std::pair<std::string, std::string>, int> coplay_points;
  for (size_t i : RowsOf(tables.scores, sid)) {
    const CsvTable& t = tables.scores;
    const std::string s = t.Get(i, "session_id");
    points[{s, Int(t.Get(i, "episode"))}] = Int(t.Get(i, "points"));
    if (t.Get(i, "kind") == "coplay") {
      coplay_points[{s, t.Get(i, "co_player")}] = Int(t.Get(i, "points"));
    }
  }
  const std::vector<std::string> id_labels = IdentityLabels(agents);
  auto identity = [&](const std::string& label, double sign, std::vector<double>& v) {
    for (size_t j = 0; j < id_labels.size(); ++j) {
      if (id_labels[j] == label) v[j] += sign;
    }
  };

  std::vector<DesignRow> rows;
  size_t dropped = 0;
  if (study != StudyVariant::kStudy3) {
    out.notes.push_back(
        "preference value mapped to [0, 1] as (value - 1) / 4; 1 means the second co-player; "
        "predictors are second minus first");
    for (size_t i : RowsOf(tables.preferences, sid)) {
      const CsvTable& t = tables.preferences;
      const std::string s = t.Get(i, "session_id");
      const EpisodeKey e1{s, Int(t.Get(i, "first_episode"))};
      const EpisodeKey e2{s, Int(t.Get(i, "second_episode"))};
      if (!composite_of.contains(e1) || !composite_of.contains(e2) || !points.contains(e1) ||
          !points.contains(e2)) {
        ++dropped;
        continue;
      }
      DesignRow r;
      r.identity.assign(id_labels.size(), 0.0);
      identity(t.Get(i, "second_co_player"), 1.0, r.identity);
      identity(t.Get(i, "first_co_player"), -1.0, r.identity);
      r.score = points[e2] - points[e1];
      r.warmth = composite_of[e2]->warmth - composite_of[e1]->warmth;
      r.competence = composite_of[e2]->competence - composite_of[e1]->competence;
      r.y = LikertToUnit(Int(t.Get(i, "value")));
      rows.push_back(r);
    }
    FitModels(rows, id_labels, true, out);
  } else {
    std::map<std::pair<std::string, std::string>, const CompositeScore*> rating_of;
    for (const CompositeScore& c : out.composites.scores) rating_of[{c.participant, c.co_player}] = &c;
    for (size_t i : RowsOf(tables.choices, sid)) {
      const CsvTable& t = tables.choices;
      const std::pair<std::string, std::string> key{t.Get(i, "session_id"), t.Get(i, "co_player")};
      if (!rating_of.contains(key) || !coplay_points.contains(key)) {
        ++dropped;
        continue;
      }
      DesignRow r;
      r.identity.assign(id_labels.size(), 0.0);
      identity(key.second, 1.0, r.identity);
      r.score = coplay_points[key];
      r.warmth = rating_of[key]->warmth;
      r.competence = rating_of[key]->competence;
      r.y = t.Get(i, "choice") == "play_with_coplayer" ? 1.0 : 0.0;
      rows.push_back(r);
    }
    FitModels(rows, id_labels, false, out);
  }
  if (dropped > 0) {
    out.notes.push_back(std::to_string(dropped) + " responses without matching ratings or scores");
  }
  return out;
}

json AnalysisToJson(const StudyAnalysis& a) {
  json j;
  j["study"] = static_cast<int>(a.study);
  j["sessions"] = a.sessions;
  j["coplayers"] = json::array();
  for (const CoplayerSummary& c : a.coplayers) {
    j["coplayers"].push_back({{"co_player", c.co_player},
                              {"theta", c.theta},
                              {"epsilon", c.epsilon},
                              {"n", c.n},
                              {"warmth", {{"mean", c.warmth_mean}, {"ci", c.warmth_ci}}},
                              {"competence",
                               {{"mean", c.competence_mean}, {"ci", c.competence_ci}}}});
  }
  j["icc"] = json::object();
  for (const auto& [trait, r] : a.icc) j["icc"][trait] = IccToJson(r);
  j["trait_anova"] = a.trait_anova ? AnovaToJson(*a.trait_anova) : json(nullptr);
  j["reliability"] = json::object();
  for (const auto& [name, rho] : a.reliability) {
    j["reliability"][name] = {{"method", "spearman_brown"}, {"rho", rho}};
  }
  j["svo_tremble_anova"] = json::object();
  for (const auto& [name, t] : a.svo_tremble_anova) j["svo_tremble_anova"][name] = AnovaToJson(t);
  j["models"] = json::object();
  for (const auto& [name, fit] : a.models) j["models"][name] = ModelFitToJson(fit);
  j["ranking"] = json::array();
  for (const ModelComparisonRow& r : a.ranking) {
    j["ranking"].push_back({{"rank", r.rank},
                            {"model", r.name},
                            {"k", r.k},
                            {"loglik", r.loglik},
                            {"aic", r.aic},
                            {"delta_aic", r.delta_aic},
                            {"pseudo_r2", r.pseudo_r2},
                            {"pseudo_r2_name", r.pseudo_r2_name}});
  }
  j["notes"] = a.notes;
  return j;
}

void WriteAnalysis(const StudyAnalysis& a, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (!std::filesystem::is_directory(dir)) {
    throw ConfigError("cannot create output directory '" + dir + "'");
  }
  const std::filesystem::path root(dir);
  {
    std::ofstream out(root / "analysis.json");
    if (!out) throw ConfigError("cannot write '" + (root / "analysis.json").string() + "'");
    out << AnalysisToJson(a).dump(2) << "\n";
  }
  auto num = [](double x) { return FormatDouble(x); };

  CsvTable coefs;
  coefs.header = {"model", "kind", "term", "estimate", "se", "statistic", "p",
                  "odds_ratio", "or_lower", "or_upper"};
  for (const auto& [name, fit] : a.models) {
    for (const Coefficient& c : fit.coefficients) {
      const bool linear = fit.kind == ModelKind::kLinear;
      coefs.rows.push_back({name, ModelKindName(fit.kind), c.name, num(c.estimate), num(c.se),
                            num(c.statistic), num(c.p), linear ? "" : num(c.odds_ratio),
                            linear ? "" : num(c.or_lower), linear ? "" : num(c.or_upper)});
    }
  }
  WriteCsvFile(coefs, (root / "coefficients.csv").string());

  CsvTable ranking;
  ranking.header = {"rank", "model", "k", "loglik", "aic", "delta_aic", "pseudo_r2",
                    "pseudo_r2_name"};
  for (const ModelComparisonRow& r : a.ranking) {
    ranking.rows.push_back({std::to_string(r.rank), r.name, std::to_string(r.k), num(r.loglik),
                            num(r.aic), num(r.delta_aic), num(r.pseudo_r2), r.pseudo_r2_name});
  }
  WriteCsvFile(ranking, (root / "ranking.csv").string());

  CsvTable icc;
  icc.header = {"trait", "variant", "icc", "ci_lower", "ci_upper", "f", "df_between",
                "df_within", "p"};
  for (const auto& [trait, r] : a.icc) {
    icc.rows.push_back({trait, r.variant, num(r.value), num(r.lower), num(r.upper), num(r.f),
                        num(r.df_between), num(r.df_within), num(r.p)});
  }
  WriteCsvFile(icc, (root / "icc.csv").string());

  CsvTable anova;
  anova.header = {"analysis", "effect", "ss", "df", "ms", "f", "p"};
  auto add = [&](const std::string& analysis, const AnovaTable& t) {
    for (const AnovaRow& r : t.rows) {
      anova.rows.push_back({analysis, r.effect, num(r.ss), num(r.df), num(r.ms), num(r.f),
                            num(r.p)});
    }
  };
  if (a.trait_anova) add("trait", *a.trait_anova);
  for (const auto& [name, t] : a.svo_tremble_anova) add(name, t);
  WriteCsvFile(anova, (root / "anova.csv").string());

  CsvTable comp;
  comp.header = {"participant", "co_player", "repetition", "episode", "warmth", "competence"};
  for (const CompositeScore& c : a.composites.scores) {
    comp.rows.push_back({c.participant, c.co_player, std::to_string(c.repetition),
                         std::to_string(c.episode), num(c.warmth), num(c.competence)});
  }
  WriteCsvFile(comp, (root / "composites.csv").string());
}

}  // namespace coins
