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

#include "coins/stats/anova.h"

#include <cmath>
#include <limits>
#include <map>

#include <Eigen/Dense>
#include <boost/math/distributions/fisher_f.hpp>

#include "coins/errors.h"

namespace coins {
namespace {

double FUpperTail(double f, double df1, double df2) {
  if (std::isinf(f)) return 0.0;
  return boost::math::cdf(boost::math::complement(boost::math::fisher_f(df1, df2), f));
}

double FQuantile(double q, double df1, double df2) {
  return boost::math::quantile(boost::math::fisher_f(df1, df2), q);
}

// Distinct labels in first-seen order mapped to 0..n-1.
std::map<std::string, int> Levels(const std::vector<std::string>& labels,
                                  std::vector<int>& codes) {
  std::map<std::string, int> levels;
  std::vector<std::string> order;
  for (const std::string& l : labels) {
    if (levels.emplace(l, static_cast<int>(order.size())).second) order.push_back(l);
  }
  codes.clear();
  for (const std::string& l : labels) codes.push_back(levels.at(l));
  return levels;
}

double Rss(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (x.cols() == 0) return y.squaredNorm();
  const Eigen::VectorXd beta = x.colPivHouseholderQr().solve(y);
  return (y - x * beta).squaredNorm();
}

Eigen::MatrixXd DropColumns(const Eigen::MatrixXd& x, int first, int count) {
  Eigen::MatrixXd out(x.rows(), x.cols() - count);
  out << x.leftCols(first), x.rightCols(x.cols() - first - count);
  return out;
}

void CheckResidual(double ms_error, double df_error, double ss_total, double n) {
  if (df_error <= 0) throw NumericalError("ANOVA has no residual degrees of freedom");
  if (ss_total == 0.0 || ms_error <= 1e-14 * ss_total / n) {
    throw NumericalError("degenerate ANOVA input: zero residual variance");
  }
}

}  // namespace

IccResult Icc(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw ValidationError("ICC needs at least two targets");
  double n_total = 0.0, sum = 0.0;
  for (const auto& g : groups) {
    if (g.empty()) throw ValidationError("ICC target without ratings");
    n_total += static_cast<double>(g.size());
    for (double v : g) sum += v;
  }
  const double a = static_cast<double>(groups.size());
  if (n_total - a < 1) throw ValidationError("ICC needs repeated ratings of some target");
  const double grand = sum / n_total;
  double ssb = 0.0, ssw = 0.0;
  for (const auto& g : groups) {
    double m = 0.0;
    for (double v : g) m += v;
    m /= static_cast<double>(g.size());
    ssb += static_cast<double>(g.size()) * (m - grand) * (m - grand);
    for (double v : g) ssw += (v - m) * (v - m);
  }
  IccResult r;
  r.targets = static_cast<int>(groups.size());
  r.k = n_total / a;
  r.df_between = a - 1;
  r.df_within = n_total - a;
  r.ms_between = ssb / r.df_between;
  r.ms_within = ssw / r.df_within;
  if (r.ms_between == 0.0 && r.ms_within == 0.0) {
    throw NumericalError("ICC undefined: no variance between or within targets");
  }
  const double k = r.k;
  r.value = (r.ms_between - r.ms_within) / (r.ms_between + (k - 1) * r.ms_within);
  if (r.ms_within == 0.0) {
    r.f = std::numeric_limits<double>::infinity();
    r.lower = r.upper = 1.0;
    r.p = 0.0;
    return r;
  }
  r.f = r.ms_between / r.ms_within;
  r.p = FUpperTail(r.f, r.df_between, r.df_within);
  const double fl = r.f / FQuantile(0.975, r.df_between, r.df_within);
  const double fu = r.f * FQuantile(0.975, r.df_within, r.df_between);
  r.lower = (fl - 1) / (fl + k - 1);
  r.upper = (fu - 1) / (fu + k - 1);
  return r;
}

const AnovaRow& AnovaTable::Row(const std::string& effect) const {
  for (const AnovaRow& r : rows) {
    if (r.effect == effect) return r;
  }
  throw std::out_of_range("no ANOVA row '" + effect + "'");
}

AnovaTable OneWayAnova(const std::vector<double>& values, const std::vector<std::string>& group,
                       const std::string& name) {
  if (values.size() != group.size()) throw ValidationError("values and groups differ in length");
  std::vector<int> codes;
  const auto levels = Levels(group, codes);
  const int g = static_cast<int>(levels.size());
  if (g < 2) throw ValidationError("one-way ANOVA needs at least two groups");
  const double n = static_cast<double>(values.size());
  std::vector<double> sums(g, 0.0), counts(g, 0.0);
  double grand = 0.0;
  for (size_t i = 0; i < values.size(); ++i) {
    sums[codes[i]] += values[i];
    counts[codes[i]] += 1;
    grand += values[i];
  }
  grand /= n;
  double ssb = 0.0, ssw = 0.0, sst = 0.0;
  for (int j = 0; j < g; ++j) {
    const double m = sums[j] / counts[j];
    ssb += counts[j] * (m - grand) * (m - grand);
  }
  for (size_t i = 0; i < values.size(); ++i) {
    const double m = sums[codes[i]] / counts[codes[i]];
    ssw += (values[i] - m) * (values[i] - m);
    sst += (values[i] - grand) * (values[i] - grand);
  }
  const double df_b = g - 1, df_w = n - g;
  const double msw = df_w > 0 ? ssw / df_w : 0.0;
  CheckResidual(msw, df_w, sst, n);
  AnovaTable t;
  const double f = (ssb / df_b) / msw;
  t.rows.push_back({name, ssb, df_b, ssb / df_b, f, FUpperTail(f, df_b, df_w)});
  t.rows.push_back({"residual", ssw, df_w, msw, 0.0, 0.0});
  return t;
}

AnovaTable TwoWayAnova(const std::vector<double>& values, const std::vector<std::string>& a,
                       const std::vector<std::string>& b, const std::string& name_a,
                       const std::string& name_b) {
  if (values.size() != a.size() || values.size() != b.size()) {
    throw ValidationError("values and factors differ in length");
  }
  std::vector<int> ca, cb;
  const int la = static_cast<int>(Levels(a, ca).size());
  const int lb = static_cast<int>(Levels(b, cb).size());
  if (la < 2 || lb < 2) throw ValidationError("each factor needs at least two levels");
  const Eigen::Index n = static_cast<Eigen::Index>(values.size());
  std::vector<int> cell(la * lb, 0);
  for (Eigen::Index i = 0; i < n; ++i) cell[ca[i] * lb + cb[i]]++;
  for (int c : cell) {
    if (c == 0) throw ValidationError("two-way ANOVA needs every factor combination observed");
  }
  // Sum-to-zero coding: level j < L-1 gets indicator, last level gets -1.
  auto effect = [](int code, int levels, int column) {
    if (code == levels - 1) return -1.0;
    return code == column ? 1.0 : 0.0;
  };
  const int pa = la - 1, pb = lb - 1, pab = pa * pb;
  Eigen::MatrixXd x(n, 1 + pa + pb + pab);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    y(i) = values[i];
    x(i, 0) = 1.0;
    for (int j = 0; j < pa; ++j) x(i, 1 + j) = effect(ca[i], la, j);
    for (int j = 0; j < pb; ++j) x(i, 1 + pa + j) = effect(cb[i], lb, j);
    for (int j = 0; j < pa; ++j) {
      for (int m = 0; m < pb; ++m) x(i, 1 + pa + pb + j * pb + m) = x(i, 1 + j) * x(i, 1 + pa + m);
    }
  }
  const double rss = Rss(x, y);
  const double df_e = static_cast<double>(n - x.cols());
  const double sst = (y.array() - y.mean()).square().sum();
  const double mse = df_e > 0 ? rss / df_e : 0.0;
  CheckResidual(mse, df_e, sst, static_cast<double>(n));
  AnovaTable t;
  auto add = [&](const std::string& name, int first, int count) {
    const double ss = std::max(0.0, Rss(DropColumns(x, first, count), y) - rss);
    const double ms = ss / count;
    const double f = ms / mse;
    t.rows.push_back({name, ss, static_cast<double>(count), ms, f, FUpperTail(f, count, df_e)});
  };
  add(name_a, 1, pa);
  add(name_b, 1 + pa, pb);
  add(name_a + ":" + name_b, 1 + pa + pb, pab);
  t.rows.push_back({"residual", rss, df_e, mse, 0.0, 0.0});
  return t;
}

nlohmann::json IccToJson(const IccResult& r) {
  return {{"variant", r.variant}, {"value", r.value},       {"ci_lower", r.lower},
          {"ci_upper", r.upper},  {"f", r.f},               {"df_between", r.df_between},
          {"df_within", r.df_within}, {"p", r.p},           {"ms_between", r.ms_between},
          {"ms_within", r.ms_within}, {"k", r.k},           {"targets", r.targets}};
}

nlohmann::json AnovaToJson(const AnovaTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const AnovaRow& r : t.rows) {
    rows.push_back(
        {{"effect", r.effect}, {"ss", r.ss}, {"df", r.df}, {"ms", r.ms}, {"f", r.f}, {"p", r.p}});
  }
  return rows;
}

}  // namespace coins
