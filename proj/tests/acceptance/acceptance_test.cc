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

// Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero when any
// criterion fails.

#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "coins/agents/learner.h"
#include "coins/agents/policy.h"
#include "coins/agents/svo.h"
#include "coins/agents/tremble.h"
#include "coins/env/game.h"
#include "coins/env/reward.h"
#include "coins/experiments/evaluate.h"
#include "coins/experiments/report.h"
#include "coins/stats/anova.h"
#include "coins/stats/descriptive.h"
#include "coins/stats/glm.h"
#include "coins/study/bonus.h"
#include "coins/study/config.h"
#include "coins/study/participant.h"
#include "coins/study/session.h"
#include "coins/study/store.h"

namespace coins {
namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;
  void Require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

double CpuSeconds() { return static_cast<double>(std::clock()) / CLOCKS_PER_SEC; }

// -- 1 ------------------------------------------------------------------------

void RewardTables(Verdict& v) {
  struct Expected {
    RewardScheme scheme;
    bool matching;
    int self;
    int other;
  };
  // Canonical: match +1 / 0, mismatch +1 / -2. Alternative: +3 / +2, +3 / 0.
  const std::vector<Expected> table = {{RewardScheme::Canonical(), true, 1, 0},
                                       {RewardScheme::Canonical(), false, 1, -2},
                                       {RewardScheme::Offset(), true, 3, 2},
                                       {RewardScheme::Offset(), false, 3, 0}};
  int cases = 0;
  for (const Expected& e : table) {
    for (int collector : {0, 1}) {
      TaskConfig c;
      c.width = c.depth = 7;
      c.spawn_prob = 0.0;
      c.horizon = 10;
      c.scheme = e.scheme;
      GameState s = GenerateRoom(c, 1, std::make_pair(Color::kRed, Color::kBlue));
      const std::vector<Position> at = {{2, 2}, {4, 4}};
      s.SetPlayerPositions(at);
      const Color own = collector == 0 ? Color::kRed : Color::kBlue;
      const Color foreign = collector == 0 ? Color::kBlue : Color::kRed;
      const Position target{at[collector].row, at[collector].col + 1};
      s.SetCoin(target, e.matching ? own : foreign);
      std::vector<Action> joint = {Action::kNoOp, Action::kNoOp};
      joint[collector] = Action::kMoveRight;
      const StepOutcome out = Step(s, joint, c);
      const bool ok = out.events.size() == 1 && out.rewards[collector] == e.self &&
                      out.rewards[1 - collector] == e.other;
      v.Require(ok, std::string(SchemeName(e.scheme.name)) +
                        (e.matching ? " matching" : " mismatching") + " collector " +
                        std::to_string(collector));
      ++cases;
    }
  }
  v.detail << cases << "/8 cases checked through Step";
}

// -- 2 ------------------------------------------------------------------------

void CollectiveReturnIdentity(Verdict& v) {
  const Agent a = Agent::FromSpec([] {
    PolicySpec s;
    s.kind = PolicySpec::Kind::kUniformRandom;
    return s;
  }());
  const Agent b = Agent::FromSpec(PolicySpec::Scripted(0, 0.3));
  int64_t events = 0;
  for (bool offset : {false, true}) {
    TaskConfig c = TaskConfig::Coplay();
    c.spawn_prob = 0.005;
    c.scheme = offset ? RewardScheme::Offset() : RewardScheme::Canonical();
    const PairMetrics m = EvaluatePair(a, b, c, 1000, offset ? 2 : 1, 4);
    int bad = 0;
    for (const EpisodeMetrics& e : m.episodes) {
      const int expected = offset ? 5 * e.matching_coins + 3 * e.mismatching_coins
                                  : e.matching_coins - e.mismatching_coins;
      if (e.collective_return != expected ||
          e.player_returns[0] + e.player_returns[1] != e.collective_return) {
        ++bad;
      }
      events += e.total_coins;
    }
    v.Require(m.episodes.size() == 1000 && bad == 0,
              std::string(offset ? "offset" : "canonical") + " identity, " +
                  std::to_string(bad) + " bad episodes");
  }
  v.Require(events > 1000, "too few collections to be informative");
  v.detail << "2 x 1000 episodes, " << events << " collections, exact integer identity";
}

// -- 3 ------------------------------------------------------------------------

void SelfishNull(Verdict& v) {
  const auto start = std::chrono::steady_clock::now();
  const Agent selfish = Agent::FromSpec(PolicySpec::Scripted(0, 0));
  const TaskConfig c = TaskConfig::Coplay();
  v.Require(c.width == 11 && c.depth == 11 && c.horizon == 300 &&
                c.scheme == RewardScheme::Canonical(),
            "co-play configuration is 11x11, T=300, canonical");
  const PairMetrics m = EvaluatePair(selfish, selfish, c, 300, 2024);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  v.Require(m.collective_return.Contains(0.0), "95% CI contains 0");
  v.Require(seconds < 60.0, "runtime under 1 minute");
  v.detail << "collective return " << m.collective_return.mean << " [" << m.collective_return.lower()
           << ", " << m.collective_return.upper() << "], coins " << m.total_coins.mean << ", "
           << seconds << " s";
}

// -- 4 ------------------------------------------------------------------------

void ProsocialSeparation(Verdict& v) {
  const double cpu0 = CpuSeconds();
  TaskConfig task;
  task.width = task.depth = 5;
  task.horizon = 100;
  task.spawn_prob = 0.05;
  LearnerConfig learner;
  learner.feature_radius = 4;
  learner.total_steps = 400000;
  learner.checkpoint_interval = learner.total_steps;
  learner.workers = 1;
  std::map<double, PairMetrics> results;
  for (double theta : {45.0, 0.0}) {
    const std::vector<double> thetas = {theta, theta};
    const auto checkpoints = TrainSelfPlay(task, thetas, learner, 7);
    const Checkpoint& last = checkpoints.back();
    auto net = [&](int i) {
      return Agent{PolicySpec{}, std::make_shared<LearnedPolicy>(
                                     std::make_shared<const ActorCriticNet>(last.agents[i].net))};
    };
    results[theta] = EvaluatePair(net(0), net(1), task, 100, 99);
  }
  const double cpu_minutes = (CpuSeconds() - cpu0) / 60.0;
  const MetricSummary& pro = results[45.0].collective_return;
  const MetricSummary& self = results[0.0].collective_return;
  v.Require(pro.lower() > self.upper(), "non-overlapping 95% CIs, prosocial above");
  v.Require(cpu_minutes <= 30.0, "training and evaluation within 30 CPU-minutes");
  v.detail << "5x5 T=100, 2 x " << learner.total_steps << " steps; theta=45 " << pro.mean
           << " [" << pro.lower() << ", " << pro.upper() << "] vs theta=0 " << self.mean << " ["
           << self.lower() << ", " << self.upper() << "], " << cpu_minutes << " CPU-min";
}

// -- 5 ------------------------------------------------------------------------

void EpsilonSweepCriterion(Verdict& v) {
  const std::vector<NamedPair> pairs = {
      {"selfish", PolicySpec::Scripted(0, 0), PolicySpec::Scripted(0, 0)},
      {"prosocial", PolicySpec::Scripted(45, 0), PolicySpec::Scripted(45, 0)}};
  const EvalReport r = EpsilonSweep(pairs, TaskConfig::Coplay(), kDefaultEpsilons, 100, 3, 4);
  auto row = [&](const std::string& s, double eps) -> const EvalRow& {
    for (const EvalRow& x : r.rows) {
      if (x.series == s && x.epsilon == eps) return x;
    }
    throw std::runtime_error("missing sweep row");
  };
  for (const std::string s : {"selfish", "prosocial"}) {
    const EvalRow& lo = row(s, 0.0);
    const EvalRow& hi = row(s, 1.0);
    v.Require(lo.total_coins.lower() > hi.total_coins.upper(), s + " coins CI separation");
    v.detail << s << " coins " << lo.total_coins.mean << " -> " << hi.total_coins.mean << "; ";
  }
  // Every prosocial episode at epsilon 0 is free of mismatches when the
  // mean over non-negative counts is exactly zero.
  const EvalRow& p0 = row("prosocial", 0.0);
  const EvalRow& p1 = row("prosocial", 1.0);
  v.Require(p0.mismatching_coins.mean == 0.0 && p0.mismatching_coins.sd == 0.0,
            "prosocial mismatches exactly 0 at epsilon 0");
  v.Require(p1.mismatching_coins.mean > 0.0, "prosocial mismatches positive at epsilon 1");
  v.detail << "prosocial mismatches " << p0.mismatching_coins.mean << " -> "
           << p1.mismatching_coins.mean;
}

// -- 6 ------------------------------------------------------------------------

void SvoProperties(Verdict& v) {
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> r(-5, 5);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double a = r(gen), b = r(gen);
    const std::vector<double> other_b = {b}, other_a = {a};
    worst = std::max(worst, std::abs(SvoUtility(a, other_b, 0) - a));
    worst = std::max(worst, std::abs(SvoUtility(a, other_b, 45) - SvoUtility(b, other_a, 45)));
    worst = std::max(worst, std::abs(SvoUtility(a, other_b, 90) - b));
  }
  const std::vector<double> minus_two = {-2.0};
  const double worked = SvoUtility(1.0, minus_two, 45);
  worst = std::max(worst, std::abs(worked + std::sqrt(2.0) / 2.0));
  v.Require(worst <= 1e-12, "all properties within 1e-12");
  v.detail << "10000 random pairs; U(1,[-2],45) = " << worked << "; max error " << worst;
}

// -- 7 ------------------------------------------------------------------------

void TrembleStatistics(Verdict& v) {
  const int n = 100000;
  Rng rng(77);
  int changed = 0;
  for (int i = 0; i < n; ++i) {
    const Action a = static_cast<Action>(i % kNumActions);
    if (Tremble(a, {0.0}, rng) != a) ++changed;
  }
  v.Require(changed == 0, "epsilon 0 is the identity");
  int same = 0;
  for (int i = 0; i < n; ++i) {
    const Action a = static_cast<Action>(i % kNumActions);
    if (Tremble(a, {0.5}, rng) == a) ++same;
  }
  const double rate = double(same) / n;
  const double sigma = std::sqrt(0.6 * 0.4 / n);
  v.Require(std::abs(rate - 0.6) <= 4 * sigma, "epsilon 0.5 identity rate 0.6 +/- 4 sigma");
  std::vector<int> counts(kNumActions, 0);
  for (int i = 0; i < n; ++i) counts[static_cast<int>(Tremble(Action::kNoOp, {1.0}, rng))]++;
  const double s1 = std::sqrt(0.2 * 0.8 / n);
  double worst_z = 0.0;
  for (int c : counts) worst_z = std::max(worst_z, std::abs(double(c) / n - 0.2) / s1);
  v.Require(worst_z <= 4.0, "epsilon 1 marginal uniform within 4 sigma");
  v.detail << "1e5 calls each; identity rate " << rate << " (sigma " << sigma
           << "); worst uniform |z| " << worst_z;
}

// -- 8 ------------------------------------------------------------------------

struct Played {
  Session session;
  std::vector<EventRecord> log;
};

Played Play(StudyVariant variant, uint64_t seed, const std::string& choice = "") {
  SessionInit init{"acceptance-" + std::to_string(seed), "p", StudyConfig::ForVariant(variant),
                   seed};
  Played p{Session(init), {}};
  p.log.push_back({0, 0, "session_start", SessionInitToJson(init)});
  ScriptedParticipant::Options o;
  o.choice_override = choice;
  ScriptedParticipant participant(seed, o);
  SimulateSession(p.session, participant, [&](const ClientEvent& e) {
    p.log.push_back({static_cast<int64_t>(p.log.size()), 0, e.type, e.payload});
  });
  return p;
}

void StudyFlow(Verdict& v) {
  const Played s1 = Play(StudyVariant::kStudy1, 11);
  const Session& a = s1.session;
  int coplay = 0;
  for (const EpisodeRecord& e : a.episodes()) coplay += e.kind == EpisodeRecord::Kind::kCoplay;
  size_t ratings = 0;
  for (const PerceptionResponse& p : a.perceptions()) ratings += p.items.size();
  std::set<std::set<std::string>> pairs;
  for (const PreferenceResponse& p : a.preferences()) pairs.insert({p.first, p.second});
  v.Require(a.complete(), "study 1 completes");
  v.Require(coplay == 12, "12 co-play episodes");
  v.Require(ratings == 48, "48 perception ratings");
  v.Require(a.preferences().size() == 6 && pairs.size() == 6, "6 preferences over all 6 pairs");
  v.Require(ReplaySession(s1.log).Snapshot() == a.Snapshot(), "study 1 replay identical");

  for (const std::string choice : {"play_alone", "play_with_coplayer"}) {
    const Played s3 = Play(StudyVariant::kStudy3, 23, choice);
    const Session& b = s3.session;
    const EpisodeRecord& last = b.episodes().back();
    const bool alone = choice == "play_alone";
    v.Require(b.complete(), "study 3 completes");
    v.Require(b.perceptions().size() == 1 && b.perceptions()[0].items.size() == 4,
              "study 3 has one rating set");
    v.Require(b.choice().has_value() && b.choice()->play_alone == alone, "one partner choice");
    v.Require(last.kind == EpisodeRecord::Kind::kFinal && last.n_players == (alone ? 1 : 2) &&
                  last.co_player == (alone ? "" : b.plan().coplayers[0]),
              choice + " final episode parameters");
    v.Require(ReplaySession(s3.log).Snapshot() == b.Snapshot(), "study 3 replay identical");
  }
  v.detail << "study 1: " << coplay << " episodes, " << ratings << " ratings, "
           << a.preferences().size() << " preferences over " << pairs.size()
           << " pairs; study 3 both choices; " << s1.log.size() << " logged events replayed";
}

// -- 9 ------------------------------------------------------------------------

void BonusArithmetic(Verdict& v) {
  const double r1 = StudyConfig::ForVariant(StudyVariant::kStudy1).bonus_per_point;
  const double r2 = StudyConfig::ForVariant(StudyVariant::kStudy2).bonus_per_point;
  const double r3 = StudyConfig::ForVariant(StudyVariant::kStudy3).bonus_per_point;
  v.Require(r1 == 0.10 && r2 == 0.02 && r3 == 0.02, "rates $0.10 / $0.02 / $0.02");
  struct Fixture {
    int64_t points;
    double rate;
    int64_t cents;
  };
  const std::vector<Fixture> fixtures = {
      {0, 0.10, 0},   {1, 0.10, 10},   {37, 0.10, 370}, {250, 0.10, 2500}, {-5, 0.10, 0},
      {-400, 0.02, 0}, {1, 0.02, 2},  {123, 0.02, 246}, {1000, 0.02, 2000}, {0, 0.02, 0}};
  for (const Fixture& f : fixtures) {
    v.Require(BonusCents(f.points, f.rate) == f.cents,
              std::to_string(f.points) + " points at " + FormatDollars(std::llround(f.rate * 100)));
  }
  v.Require(FormatDollars(370) == "3.70" && FormatDollars(0) == "0.00", "dollar formatting");
  int sessions = 0;
  for (StudyVariant s : {StudyVariant::kStudy1, StudyVariant::kStudy2, StudyVariant::kStudy3}) {
    const Played p = Play(s, 40 + static_cast<int>(s));
    const int64_t points = p.session.coplay_points();
    const double rate = p.session.config().bonus_per_point;
    const int64_t expected = points <= 0 ? 0 : std::llround(points * rate * 100);
    v.Require(p.session.bonus_cents() == expected, "session ledger " + VariantName(s));
    ++sessions;
  }
  v.detail << fixtures.size() << " fixtures incl. $0 floor; " << sessions
           << " session ledgers recomputed";
}

// -- 10 -----------------------------------------------------------------------

void StatsOracles(Verdict& v) {
  // Spearman-Brown round trip through rho = 0.93.
  const double r = SpearmanBrownInverse(0.93);
  v.Require(std::abs(SpearmanBrown(r) - 0.93) < 1e-12 && std::abs(r - 0.869158878504673) < 1e-12,
            "Spearman-Brown round trip");

  // ICC = 1 and ICC ~ 0.
  const IccResult one = Icc({{1, 1, 1}, {4, 4, 4}, {2, 2, 2}, {5, 5, 5}});
  std::mt19937_64 gen(1);
  std::normal_distribution<double> normal(0, 1);
  std::vector<std::vector<double>> noise(200);
  for (auto& t : noise) t = {normal(gen), normal(gen), normal(gen)};
  const IccResult zero = Icc(noise);
  v.Require(one.value == 1.0, "ICC of consistent targets is 1");
  v.Require(std::abs(zero.value) < 0.1, "ICC of noise within 0.1 of 0");

  // Logistic recovery, n = 5000.
  std::uniform_real_distribution<double> unif(0, 1);
  const int n = 5000;
  Eigen::MatrixXd x(n, 2);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    x(i, 0) = 1;
    x(i, 1) = normal(gen);
    y(i) = unif(gen) < 1 / (1 + std::exp(-(0.5 - 1.2 * x(i, 1)))) ? 1 : 0;
  }
  const ModelFit fit = FitLogistic(x, y);
  const double truth[2] = {0.5, -1.2};
  for (int j = 0; j < 2; ++j) {
    const Coefficient& c = fit.coefficients[j];
    v.Require(std::abs(c.estimate - truth[j]) < 1.959963984540054 * c.se,
              "beta" + std::to_string(j) + " inside its Wald 95% CI");
  }

  // Fractional logit on binary data.
  const ModelFit frac = FitFractionalLogit(x, y);
  const double frac_gap = (frac.beta - fit.beta).cwiseAbs().maxCoeff();
  v.Require(frac_gap <= 1e-6, "fractional equals logistic on binary data");

  // AIC and Nagelkerke by direct summation on a 10-row fixture.
  Eigen::MatrixXd x10(10, 2);
  Eigen::VectorXd y10(10);
  const double xs[10] = {-2.1, -1.3, -0.8, -0.4, 0.0, 0.3, 0.9, 1.2, 1.8, 2.5};
  const double ys[10] = {0, 0, 1, 0, 0, 1, 0, 1, 1, 1};
  for (int i = 0; i < 10; ++i) {
    x10(i, 0) = 1;
    x10(i, 1) = xs[i];
    y10(i) = ys[i];
  }
  const ModelFit f10 = FitLogistic(x10, y10);
  double ll = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double p = 1 / (1 + std::exp(-(f10.beta(0) + f10.beta(1) * xs[i])));
    ll += ys[i] * std::log(p) + (1 - ys[i]) * std::log(1 - p);
  }
  const double l0 = 10 * std::log(0.5);
  const double nagelkerke = (1 - std::exp(2 * (l0 - ll) / 10)) / (1 - std::exp(2 * l0 / 10));
  v.Require(std::abs(f10.aic - (2 * 2 - 2 * ll)) < 1e-9, "AIC recomputed");
  v.Require(std::abs(f10.pseudo_r2 - nagelkerke) < 1e-9, "Nagelkerke R2 recomputed");

  // Ranking: lower AIC first; equal AIC goes to the smaller model.
  auto handset = [](int k, double loglik) {
    ModelFit m;
    m.k = k;
    m.loglik = loglik;
    return m;
  };
  const auto rows = CompareModels({{"identity", handset(4, -826.95)},
                                   {"score", handset(2, -846.6)},
                                   {"perception", handset(3, -802.6)},
                                   {"perception_tied_bigger", handset(4, -801.6)}});
  v.Require(rows[0].name == "perception" && rows[1].name == "perception_tied_bigger" &&
                rows[2].name == "identity" && rows[3].name == "score",
            "AIC ranking with tie-break");
  v.detail << "SB(" << r << ") = 0.93; ICC " << one.value << " / " << zero.value << "; beta ("
           << fit.beta(0) << ", " << fit.beta(1) << "); fractional gap " << frac_gap
           << "; 10-row AIC " << f10.aic << ", R2 " << f10.pseudo_r2;
}

}  // namespace
}  // namespace coins

int main() {
  using namespace coins;
  const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria = {
      {"reward-table exactness", RewardTables},
      {"collective-return identity", CollectiveReturnIdentity},
      {"selfish null", SelfishNull},
      {"prosocial separation", ProsocialSeparation},
      {"epsilon-sweep degradation", EpsilonSweepCriterion},
      {"svo properties", SvoProperties},
      {"trembling-hand statistics", TrembleStatistics},
      {"study-flow conformance", StudyFlow},
      {"bonus arithmetic", BonusArithmetic},
      {"stats oracles", StatsOracles},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
      run(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << "[exception: " << e.what() << "]";
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass) ++failed;
    std::cout << (v.pass ? "PASS" : "FAIL") << " " << index << " " << name << " (" << seconds
              << " s): " << v.detail.str() << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
