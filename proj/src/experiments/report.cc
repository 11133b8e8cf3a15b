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

#include "coins/experiments/report.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "coins/errors.h"
#include "coins/util/csv.h"

namespace coins {

EvalReport EpsilonSweep(const std::vector<NamedPair>& pairs,
                        const TaskConfig& config,
                        const std::vector<double>& epsilons, int episodes,
                        uint64_t seed, int workers) {
  for (double eps : epsilons) {
    if (!(eps >= 0.0 && eps <= 1.0)) {
      throw ConfigError("epsilon values must lie in [0, 1]");
    }
  }
  EvalReport report;
  report.episodes_per_point = episodes;
  for (const NamedPair& pair : pairs) {
    for (double eps : epsilons) {
      PolicySpec a = pair.a;
      PolicySpec b = pair.b;
      a.tremble.epsilon = eps;
      b.tremble.epsilon = eps;
      const PairMetrics m = EvaluatePair(Agent::FromSpec(a), Agent::FromSpec(b),
                                         config, episodes, seed, workers);
      report.rows.push_back({pair.name, 0, eps, episodes, m.total_coins,
                             m.mismatching_coins, m.collective_return});
    }
  }
  return report;
}

EvalReport EvaluateCheckpoints(const std::vector<std::string>& checkpoint_paths,
                               const std::string& series,
                               const TaskConfig& config, double epsilon,
                               int episodes, uint64_t seed, int workers) {
  EvalReport report;
  report.episodes_per_point = episodes;
  for (const std::string& path : checkpoint_paths) {
    const Checkpoint ckpt = LoadCheckpoint(path);
    if (ckpt.agents.size() != 2) throw ConfigError(path + ": expected 2 agents");
    std::vector<Agent> agents;
    for (int i = 0; i < 2; ++i) {
      PolicySpec spec;
      spec.kind = PolicySpec::Kind::kLearned;
      spec.checkpoint = path;
      spec.agent_index = i;
      spec.svo.theta_degrees = ckpt.agents[i].theta;
      spec.tremble.epsilon = epsilon;
      agents.push_back(Agent::FromSpec(spec));
    }
    const PairMetrics m =
        EvaluatePair(agents[0], agents[1], config, episodes, seed, workers);
    report.rows.push_back({series, ckpt.steps, epsilon, episodes, m.total_coins,
                           m.mismatching_coins, m.collective_return});
  }
  return report;
}

namespace {

const std::vector<std::string> kColumns = {
    "series",
    "steps_trained",
    "epsilon",
    "episodes",
    "total_coins_mean",
    "total_coins_sd",
    "total_coins_ci",
    "mismatching_coins_mean",
    "mismatching_coins_sd",
    "mismatching_coins_ci",
    "collective_return_mean",
    "collective_return_sd",
    "collective_return_ci",
};

void AppendSummary(std::vector<std::string>& fields, const MetricSummary& s) {
  fields.push_back(FormatDouble(s.mean));
  fields.push_back(FormatDouble(s.sd));
  fields.push_back(FormatDouble(s.ci_half_width));
}

MetricSummary ReadSummary(const CsvTable& t, size_t row, const std::string& prefix,
                          int n) {
  MetricSummary s;
  s.mean = ParseDouble(t.Get(row, prefix + "_mean"));
  s.sd = ParseDouble(t.Get(row, prefix + "_sd"));
  s.ci_half_width = ParseDouble(t.Get(row, prefix + "_ci"));
  s.n = n;
  return s;
}

nlohmann::json SummaryJson(const MetricSummary& s) {
  return {{"mean", s.mean}, {"sd", s.sd}, {"ci95_half_width", s.ci_half_width}};
}

const MetricSummary& Metric(const EvalRow& row, const std::string& metric) {
  if (metric == "total_coins") return row.total_coins;
  if (metric == "mismatching_coins") return row.mismatching_coins;
  if (metric == "collective_return") return row.collective_return;
  throw ConfigError("unknown metric '" + metric + "'");
}

}  // namespace

std::string ReportToCsv(const EvalReport& report) {
  std::string out = CsvLine(kColumns);
  for (const EvalRow& r : report.rows) {
    std::vector<std::string> f = {r.series, std::to_string(r.steps_trained),
                                  FormatDouble(r.epsilon), std::to_string(r.episodes)};
    AppendSummary(f, r.total_coins);
    AppendSummary(f, r.mismatching_coins);
    AppendSummary(f, r.collective_return);
    out += CsvLine(f);
  }
  return out;
}

EvalReport ReportFromCsv(const std::string& csv) {
  const CsvTable t = ParseCsv(csv);
  if (t.header != kColumns) throw ConfigError("unexpected report CSV header");
  EvalReport report;
  for (size_t i = 0; i < t.rows.size(); ++i) {
    EvalRow r;
    r.series = t.Get(i, "series");
    r.steps_trained = std::stoll(t.Get(i, "steps_trained"));
    r.epsilon = ParseDouble(t.Get(i, "epsilon"));
    r.episodes = std::stoi(t.Get(i, "episodes"));
    r.total_coins = ReadSummary(t, i, "total_coins", r.episodes);
    r.mismatching_coins = ReadSummary(t, i, "mismatching_coins", r.episodes);
    r.collective_return = ReadSummary(t, i, "collective_return", r.episodes);
    report.rows.push_back(r);
  }
  if (!report.rows.empty()) report.episodes_per_point = report.rows.front().episodes;
  return report;
}

nlohmann::json ReportToJson(const EvalReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const EvalRow& r : report.rows) {
    rows.push_back({{"series", r.series},
                    {"steps_trained", r.steps_trained},
                    {"epsilon", r.epsilon},
                    {"episodes", r.episodes},
                    {"total_coins", SummaryJson(r.total_coins)},
                    {"mismatching_coins", SummaryJson(r.mismatching_coins)},
                    {"collective_return", SummaryJson(r.collective_return)}});
  }
  return {{"episodes_per_point", report.episodes_per_point},
          {"ci_method", "normal approximation, 1.96 * sd / sqrt(episodes)"},
          {"rows", rows}};
}

std::string ReportToSvg(const EvalReport& report, const std::string& metric) {
  constexpr double kW = 640, kH = 400, kLeft = 60, kRight = 20, kTop = 30,
                   kBottom = 50;
  const bool by_steps = std::any_of(report.rows.begin(), report.rows.end(),
                                    [](const EvalRow& r) { return r.steps_trained > 0; });
  auto x_of = [&](const EvalRow& r) {
    return by_steps ? static_cast<double>(r.steps_trained) : r.epsilon;
  };

  std::map<std::string, std::vector<const EvalRow*>> series;
  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  bool first = true;
  for (const EvalRow& r : report.rows) {
    series[r.series].push_back(&r);
    const MetricSummary& m = Metric(r, metric);
    if (first) {
      x_min = x_max = x_of(r);
      y_min = m.lower();
      y_max = m.upper();
      first = false;
    }
    x_min = std::min(x_min, x_of(r));
    x_max = std::max(x_max, x_of(r));
    y_min = std::min(y_min, m.lower());
    y_max = std::max(y_max, m.upper());
  }
  if (x_max == x_min) x_max = x_min + 1;
  if (y_max == y_min) y_max = y_min + 1;
  auto px = [&](double x) {
    return kLeft + (x - x_min) / (x_max - x_min) * (kW - kLeft - kRight);
  };
  auto py = [&](double y) {
    return kH - kBottom - (y - y_min) / (y_max - y_min) * (kH - kTop - kBottom);
  };

  static const char* kColors[] = {"#0072b2", "#d55e00", "#009e73", "#cc79a7",
                                  "#f0e442", "#56b4e9"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
      << "\" height=\"" << kH << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kH - kBottom << "\" x2=\""
      << kW - kRight << "\" y2=\"" << kH - kBottom << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kH - kBottom << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 10
      << "\" text-anchor=\"middle\">" << (by_steps ? "steps trained" : "epsilon")
      << "</text>\n";
  svg << "<text x=\"" << kLeft << "\" y=\"20\">" << metric << " (95% CI)</text>\n";
  svg << "<text x=\"" << kLeft - 5 << "\" y=\"" << py(y_min)
      << "\" text-anchor=\"end\">" << FormatDouble(y_min) << "</text>\n";
  svg << "<text x=\"" << kLeft - 5 << "\" y=\"" << py(y_max)
      << "\" text-anchor=\"end\">" << FormatDouble(y_max) << "</text>\n";

  int color = 0;
  for (auto& [name, rows] : series) {
    std::sort(rows.begin(), rows.end(),
              [&](const EvalRow* a, const EvalRow* b) { return x_of(*a) < x_of(*b); });
    const char* stroke = kColors[color++ % 6];
    std::ostringstream band, line;
    for (const EvalRow* r : rows) {
      band << px(x_of(*r)) << ',' << py(Metric(*r, metric).upper()) << ' ';
    }
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
      band << px(x_of(**it)) << ',' << py(Metric(**it, metric).lower()) << ' ';
    }
    for (const EvalRow* r : rows) {
      line << px(x_of(*r)) << ',' << py(Metric(*r, metric).mean) << ' ';
    }
    svg << "<polygon points=\"" << band.str() << "\" fill=\"" << stroke
        << "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";
    svg << "<polyline points=\"" << line.str() << "\" fill=\"none\" stroke=\""
        << stroke << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << kW - kRight - 5 << "\" y=\"" << kTop + 15 * color
        << "\" text-anchor=\"end\" fill=\"" << stroke << "\">" << name << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void EmitReport(const EvalReport& report, ReportFormat format,
                const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write report to " + path);
  switch (format) {
    case ReportFormat::kCsv: out << ReportToCsv(report); break;
    case ReportFormat::kJson: out << ReportToJson(report).dump(2) << '\n'; break;
    case ReportFormat::kSvg: out << ReportToSvg(report); break;
  }
  if (!out) throw ConfigError("failed writing report to " + path);
}

}  // namespace coins
