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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "coins/errors.h"
#include "coins/stats/analysis.h"
#include "coins/stats/anova.h"
#include "coins/stats/composite.h"
#include "coins/stats/descriptive.h"
#include "coins/stats/glm.h"
#include "coins/study/participant.h"
#include "doctest.h"

namespace coins {
namespace {

const std::vector<std::string> kTraits = {"warm", "well_intentioned", "competent",
                                          "intelligent"};

double LogisticLogLik(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                      const Eigen::VectorXd& beta) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double p = 1.0 / (1.0 + std::exp(-x.row(i).dot(beta)));
    ll += y(i) * std::log(p) + (1 - y(i)) * std::log(1 - p);
  }
  return ll;
}

// -- composites ---------------------------------------------------------------

TEST_CASE("composites average their two items") {
  std::vector<Rating> r;
  const std::vector<int> values = {5, 3, 2, 2};
  for (int t = 0; t < 4; ++t) r.push_back({"p", "A", 1, kTraits[t], values[t], 7});
  for (int t = 0; t < 4; ++t) r.push_back({"p", "B", 1, kTraits[t], 4, 8});
  const CompositeResult c = Composite(r);
  REQUIRE(c.scores.size() == 2);
  CHECK(c.scores[0].warmth == 4.0);
  CHECK(c.scores[0].competence == 2.0);
  CHECK(c.scores[0].episode == 7);
  CHECK(c.scores[1].warmth == 4.0);
  CHECK(c.scores[1].competence == 4.0);
  CHECK(c.excluded.empty());
}

TEST_CASE("composites match a brute-force re-aggregation") {
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<int> likert(1, 5);
  std::bernoulli_distribution drop(0.05);
  std::vector<Rating> r;
  for (int p = 0; p < 12; ++p) {
    for (const char* agent : {"A", "B", "C"}) {
      for (int rep = 1; rep <= 3; ++rep) {
        for (const std::string& t : kTraits) {
          if (!drop(gen)) r.push_back({"p" + std::to_string(p), agent, rep, t, likert(gen)});
        }
      }
    }
  }
  std::shuffle(r.begin(), r.end(), gen);
  const CompositeResult c = Composite(r);
  CHECK(c.scores.size() + c.excluded.size() == 108u);
  CHECK(!c.excluded.empty());
  for (const CompositeScore& s : c.scores) {
    double warm_sum = 0, comp_sum = 0;
    int count = 0;
    for (const Rating& x : r) {
      if (x.participant != s.participant || x.co_player != s.co_player ||
          x.repetition != s.repetition) {
        continue;
      }
      ++count;
      (x.trait == "warm" || x.trait == "well_intentioned" ? warm_sum : comp_sum) += x.value;
    }
    CHECK(count == 4);
    CHECK(s.warmth == warm_sum / 2);
    CHECK(s.competence == comp_sum / 2);
    CHECK(s.warmth >= 1);
    CHECK(s.warmth <= 5);
  }
}

TEST_CASE("composite input validation") {
  CHECK_THROWS_AS(Composite({{"p", "A", 1, "kind", 3}}), ValidationError);
  CHECK_THROWS_AS(Composite({{"p", "A", 1, "warm", 6}}), ValidationError);
  CHECK_THROWS_AS(Composite({{"p", "A", 1, "warm", 0}}), ValidationError);
  CHECK_THROWS_AS(Composite({{"p", "A", 1, "warm", 3}, {"p", "A", 1, "warm", 4}}),
                  ValidationError);
  const CompositeResult partial = Composite({{"p", "A", 1, "warm", 3}});
  CHECK(partial.scores.empty());
  CHECK(partial.excluded.size() == 1);
}

// -- reliability --------------------------------------------------------------

TEST_CASE("Spearman-Brown") {
  CHECK(SpearmanBrown(1.0) == 1.0);
  CHECK(SpearmanBrown(0.0) == 0.0);
  CHECK(SpearmanBrown(0.8) == doctest::Approx(16.0 / 18.0).epsilon(1e-15));
  const double r = SpearmanBrownInverse(0.93);
  CHECK(std::abs(r - 0.93 / 1.07) < 1e-15);
  CHECK(std::abs(r - 0.869158878504673) < 1e-12);
  CHECK(std::abs(SpearmanBrown(r) - 0.93) < 1e-12);
  double prev = SpearmanBrown(-0.999);
  for (double x = -0.99; x <= 1.0; x += 0.01) {
    const double v = SpearmanBrown(x);
    CHECK(v > prev);
    prev = v;
  }
  CHECK_THROWS_AS(SpearmanBrown(-1.0), ValidationError);
  CHECK_THROWS_AS(SpearmanBrown(1.01), ValidationError);
}

TEST_CASE("standardize uses the population sd") {
  Eigen::MatrixXd x(3, 2);
  x << 1, 10, 2, 10.5, 3, 12;
  const Eigen::MatrixXd z = Standardize(x);
  CHECK(std::abs(z(0, 0) + std::sqrt(1.5)) < 1e-15);
  CHECK(z(1, 0) == 0.0);
  CHECK(std::abs(z(2, 0) - std::sqrt(1.5)) < 1e-15);
  for (int j = 0; j < 2; ++j) {
    CHECK(std::abs(z.col(j).mean()) < 1e-15);
    CHECK(std::abs(z.col(j).squaredNorm() / 3 - 1) < 1e-14);
  }
  CHECK((Standardize(z) - z).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::MatrixXd c(3, 1);
  c << 4, 4, 4;
  CHECK_THROWS_AS(Standardize(c), ValidationError);
}

TEST_CASE("ICC of perfectly consistent targets is one") {
  const IccResult r = Icc({{1, 1, 1}, {3, 3, 3}, {5, 5, 5}, {2, 2, 2}});
  CHECK(r.value == 1.0);
  CHECK(r.p == 0.0);
  CHECK(r.variant.find("ICC(1,1)") == 0);
  CHECK_THROWS_AS(Icc({{2, 2}, {2, 2}}), NumericalError);
  CHECK_THROWS_AS(Icc({{1, 2, 3}}), ValidationError);
  CHECK_THROWS_AS(Icc({{1}, {2}}), ValidationError);
}

TEST_CASE("ICC of target-independent noise is near zero") {
  std::mt19937_64 gen(11);
  std::normal_distribution<double> noise(3.0, 1.0);
  std::vector<std::vector<double>> g(200);
  for (auto& t : g) t = {noise(gen), noise(gen), noise(gen)};
  const IccResult r = Icc(g);
  CHECK(std::abs(r.value) < 0.1);
  CHECK(r.lower < r.value);
  CHECK(r.upper > r.value);
  CHECK(r.value > -0.5);
}

TEST_CASE("ICC matches hand-computed mean squares") {
  // Target means 2, 2, 4.5, 4; grand mean 3.125.
  const IccResult r = Icc({{1, 3}, {2, 2}, {5, 4}, {3, 5}});
  CHECK(std::abs(r.ms_between - 10.375 / 3) < 1e-9);
  CHECK(std::abs(r.ms_within - 4.5 / 4) < 1e-9);
  CHECK(std::abs(r.value - 28.0 / 55.0) < 1e-9);
  CHECK(std::abs(r.f - 83.0 / 27.0) < 1e-9);
  CHECK(r.df_between == 3);
  CHECK(r.df_within == 4);
  // Upper F tail through the regularized incomplete beta function.
  const double f = 83.0 / 27.0;
  CHECK(std::abs(r.p - boost::math::ibeta(2.0, 1.5, 4.0 / (4.0 + 3.0 * f))) < 1e-12);
  const double fl = f / boost::math::quantile(boost::math::fisher_f(3, 4), 0.975);
  const double fu = f * boost::math::quantile(boost::math::fisher_f(4, 3), 0.975);
  CHECK(std::abs(r.lower - (fl - 1) / (fl + 1)) < 1e-12);
  CHECK(std::abs(r.upper - (fu - 1) / (fu + 1)) < 1e-12);
}

TEST_CASE("ICC stays in its range") {
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<int> likert(1, 5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::vector<double>> g(2 + trial % 7);
    const int k = 2 + trial % 3;
    for (auto& t : g) {
      for (int j = 0; j < k; ++j) t.push_back(likert(gen));
    }
    try {
      const IccResult r = Icc(g);
      CHECK(r.value > -1.0 / (k - 1) - 1e-12);
      CHECK(r.value <= 1.0);
    } catch (const NumericalError&) {
      // Every rating identical.
    }
  }
}

// -- ANOVA --------------------------------------------------------------------

struct ClassicAnova {
  double ss_a, ss_b, ss_ab, ss_e;
};

// Textbook decomposition for a balanced design with n replicates per cell.
ClassicAnova Balanced(const std::vector<std::vector<std::vector<double>>>& cells) {
  const size_t la = cells.size(), lb = cells[0].size(), n = cells[0][0].size();
  double grand = 0;
  std::vector<double> ma(la, 0), mb(lb, 0);
  std::vector<std::vector<double>> mc(la, std::vector<double>(lb, 0));
  for (size_t i = 0; i < la; ++i) {
    for (size_t j = 0; j < lb; ++j) {
      for (double v : cells[i][j]) {
        mc[i][j] += v / n;
        ma[i] += v / (n * lb);
        mb[j] += v / (n * la);
        grand += v / (n * la * lb);
      }
    }
  }
  ClassicAnova out{0, 0, 0, 0};
  for (size_t i = 0; i < la; ++i) out.ss_a += n * lb * std::pow(ma[i] - grand, 2);
  for (size_t j = 0; j < lb; ++j) out.ss_b += n * la * std::pow(mb[j] - grand, 2);
  for (size_t i = 0; i < la; ++i) {
    for (size_t j = 0; j < lb; ++j) {
      out.ss_ab += n * std::pow(mc[i][j] - ma[i] - mb[j] + grand, 2);
      for (double v : cells[i][j]) out.ss_e += std::pow(v - mc[i][j], 2);
    }
  }
  return out;
}

void Flatten(const std::vector<std::vector<std::vector<double>>>& cells, std::vector<double>& v,
             std::vector<std::string>& a, std::vector<std::string>& b) {
  for (size_t i = 0; i < cells.size(); ++i) {
    for (size_t j = 0; j < cells[i].size(); ++j) {
      for (double x : cells[i][j]) {
        v.push_back(x);
        a.push_back("a" + std::to_string(i));
        b.push_back("b" + std::to_string(j));
      }
    }
  }
}

TEST_CASE("two-way ANOVA matches the balanced decomposition") {
  const std::vector<std::vector<std::vector<double>>> toy = {{{1, 2}, {3, 4}}, {{5, 7}, {8, 12}}};
  // Hand computation: cell means 1.5 3.5 6 10, A means 2.5 / 8, B means
  // 3.75 / 6.75, grand mean 5.25, interaction residuals +-0.5.
  std::vector<double> v;
  std::vector<std::string> a, b;
  Flatten(toy, v, a, b);
  const AnovaTable t = TwoWayAnova(v, a, b, "svo", "tremble");
  CHECK(std::abs(t.Row("svo").ss - 60.5) < 1e-9);
  CHECK(std::abs(t.Row("tremble").ss - 18.0) < 1e-9);
  CHECK(std::abs(t.Row("svo:tremble").ss - 2.0) < 1e-9);
  CHECK(std::abs(t.Row("residual").ss - 11.0) < 1e-9);
  CHECK(t.Row("residual").df == 4);
  CHECK(std::abs(t.Row("svo").f - 60.5 / (11.0 / 4)) < 1e-9);

  std::mt19937_64 gen(2);
  std::normal_distribution<double> noise(0, 1);
  std::vector<std::vector<std::vector<double>>> cells(3, std::vector<std::vector<double>>(4));
  for (auto& row : cells) {
    for (auto& cell : row) {
      for (int r = 0; r < 5; ++r) cell.push_back(noise(gen));
    }
  }
  v.clear(), a.clear(), b.clear();
  Flatten(cells, v, a, b);
  const AnovaTable big = TwoWayAnova(v, a, b);
  const ClassicAnova oracle = Balanced(cells);
  CHECK(std::abs(big.Row("a").ss - oracle.ss_a) < 1e-9);
  CHECK(std::abs(big.Row("b").ss - oracle.ss_b) < 1e-9);
  CHECK(std::abs(big.Row("a:b").ss - oracle.ss_ab) < 1e-9);
  CHECK(std::abs(big.Row("residual").ss - oracle.ss_e) < 1e-9);
  CHECK(big.Row("a:b").df == 6);
  CHECK(std::abs(big.Row("a").p - boost::math::cdf(boost::math::complement(
                                      boost::math::fisher_f(2, 48), big.Row("a").f))) < 1e-12);
}

TEST_CASE("two-way ANOVA detects a real effect and not a null one") {
  std::mt19937_64 gen(8);
  std::normal_distribution<double> noise(0, 1);
  double mean_f_b = 0.0;
  const int trials = 300;
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<double> v;
    std::vector<std::string> a, b;
    for (int i = 0; i < 120; ++i) {
      const int la = i % 2, lb = (i / 2) % 2;
      v.push_back(1.5 * la + noise(gen));
      a.push_back(la ? "45" : "0");
      b.push_back(lb ? "0.5" : "0");
    }
    const AnovaTable t = TwoWayAnova(v, a, b);
    CHECK(t.Row("a").p < 1e-6);
    mean_f_b += t.Row("b").f / trials;
  }
  // E[F(1, 116)] = 116 / 114.
  CHECK(mean_f_b == doctest::Approx(116.0 / 114.0).epsilon(0.15));
}

TEST_CASE("ANOVA input errors") {
  CHECK_THROWS_AS(TwoWayAnova({1, 1, 1, 1, 1, 1, 1, 1}, {"x", "x", "x", "x", "y", "y", "y", "y"},
                              {"u", "u", "v", "v", "u", "u", "v", "v"}),
                  NumericalError);
  CHECK_THROWS_AS(TwoWayAnova({1, 2, 3, 4}, {"x", "x", "y", "y"}, {"u", "u", "u", "v"}),
                  ValidationError);
  CHECK_THROWS_AS(TwoWayAnova({1, 2}, {"x"}, {"u", "v"}), ValidationError);
  const AnovaTable one = OneWayAnova({1, 2, 3, 7, 8, 9}, {"g", "g", "g", "h", "h", "h"});
  CHECK(std::abs(one.Row("group").ss - 54.0) < 1e-12);
  CHECK(std::abs(one.Row("residual").ss - 4.0) < 1e-12);
  CHECK(std::abs(one.Row("group").f - 54.0) < 1e-12);
}

// -- regression ---------------------------------------------------------------

TEST_CASE("intercept-only logistic fit is the sample logit") {
  Eigen::VectorXd y(10);
  y << 1, 0, 0, 1, 1, 1, 0, 1, 0, 1;
  const Eigen::MatrixXd x = Eigen::MatrixXd::Ones(10, 1);
  const ModelFit f = FitLogistic(x, y);
  CHECK(f.beta(0) == std::log(0.6 / 0.4));
  CHECK(f.pseudo_r2 == 0.0);
  CHECK(f.aic == 2.0 - 2.0 * f.null_loglik);
  CHECK(std::abs(f.null_loglik - (6 * std::log(0.6) + 4 * std::log(0.4))) < 1e-12);
  CHECK(f.score_residual < 1e-9);
}

TEST_CASE("logistic fit on a 10-row fixture") {
  Eigen::MatrixXd x(10, 2);
  Eigen::VectorXd y(10);
  const double xs[10] = {-2.1, -1.3, -0.8, -0.4, 0.0, 0.3, 0.9, 1.2, 1.8, 2.5};
  const double ys[10] = {0, 0, 1, 0, 0, 1, 0, 1, 1, 1};
  for (int i = 0; i < 10; ++i) {
    x(i, 0) = 1;
    x(i, 1) = xs[i];
    y(i) = ys[i];
  }
  GlmOptions o;
  o.names = {"intercept", "x"};
  const ModelFit f = FitLogistic(x, y, o);
  CHECK(f.converged);
  CHECK(f.k == 2);
  // Likelihood by direct summation.
  const double ll = LogisticLogLik(x, y, f.beta);
  CHECK(std::abs(f.loglik - ll) < 1e-9);
  CHECK(std::abs(f.aic - (4 - 2 * ll)) < 1e-9);
  const double l0 = 5 * std::log(0.5) + 5 * std::log(0.5);
  const double cs = 1 - std::exp(2 * (l0 - ll) / 10);
  CHECK(std::abs(f.pseudo_r2 - cs / (1 - std::exp(2 * l0 / 10))) < 1e-9);
  // Score equations at the optimum.
  Eigen::VectorXd p(10);
  for (int i = 0; i < 10; ++i) p(i) = 1 / (1 + std::exp(-x.row(i).dot(f.beta)));
  CHECK((x.transpose() * (y - p)).cwiseAbs().maxCoeff() < 1e-6);
  // The optimum: nudging any coefficient lowers the likelihood.
  for (int j = 0; j < 2; ++j) {
    for (double h : {-1e-4, 1e-4}) {
      Eigen::VectorXd b = f.beta;
      b(j) += h;
      CHECK(LogisticLogLik(x, y, b) < ll);
    }
  }
  // Wald covariance equals the inverse of the finite-difference Hessian.
  Eigen::Matrix2d hessian;
  const double h = 1e-4;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      auto at = [&](double di, double dj) {
        Eigen::VectorXd b = f.beta;
        b(i) += di;
        b(j) += dj;
        return LogisticLogLik(x, y, b);
      };
      hessian(i, j) = (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4 * h * h);
    }
  }
  const Eigen::Matrix2d cov = (-hessian).inverse();
  CHECK((cov - f.covariance).cwiseAbs().maxCoeff() < 1e-5);
  const Coefficient& c = f.Coef("x");
  CHECK(c.odds_ratio == std::exp(c.estimate));
  CHECK(std::abs(c.or_lower - std::exp(c.estimate - 1.959963984540054 * c.se)) < 1e-12);
}

TEST_CASE("logistic fit recovers known coefficients") {
  std::mt19937_64 gen(2024);
  std::normal_distribution<double> normal(0, 1);
  std::uniform_real_distribution<double> unif(0, 1);
  const int n = 5000;
  Eigen::MatrixXd x(n, 2);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    x(i, 0) = 1;
    x(i, 1) = normal(gen);
    const double p = 1 / (1 + std::exp(-(0.5 - 1.2 * x(i, 1))));
    y(i) = unif(gen) < p ? 1 : 0;
  }
  const ModelFit f = FitLogistic(x, y);
  const double truth[2] = {0.5, -1.2};
  for (int j = 0; j < 2; ++j) {
    const Coefficient& c = f.coefficients[j];
    MESSAGE("beta" << j << " = " << c.estimate << " +/- " << 1.96 * c.se);
    CHECK(std::abs(c.estimate - truth[j]) < 1.959963984540054 * c.se);
  }
  CHECK(f.score_residual < 1e-6);
  CHECK(f.pseudo_r2 > 0);
  CHECK(f.pseudo_r2 < 1);

  // Row order does not matter.
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), gen);
  Eigen::MatrixXd xp(n, 2);
  Eigen::VectorXd yp(n);
  for (int i = 0; i < n; ++i) {
    xp.row(i) = x.row(perm[i]);
    yp(i) = y(perm[i]);
  }
  const ModelFit g = FitLogistic(xp, yp);
  CHECK((g.beta - f.beta).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(std::abs(g.loglik - f.loglik) < 1e-9 * std::abs(f.loglik));
  const ModelFit again = FitLogistic(x, y);
  CHECK(again.beta == f.beta);
  CHECK(again.loglik == f.loglik);
}

TEST_CASE("logistic fit errors") {
  Eigen::MatrixXd x(6, 2);
  x << 1, -3, 1, -2, 1, -1, 1, 1, 1, 2, 1, 3;
  Eigen::VectorXd separated(6);
  separated << 0, 0, 0, 1, 1, 1;
  CHECK_THROWS_AS(FitLogistic(x, separated), SeparationError);
  Eigen::VectorXd fraction(6);
  fraction << 0, 0.5, 0, 1, 1, 1;
  CHECK_THROWS_AS(FitLogistic(x, fraction), ValidationError);
  CHECK_THROWS_AS(FitLogistic(x, Eigen::VectorXd::Ones(6)), ValidationError);
  Eigen::MatrixXd collinear(6, 2);
  collinear << 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1;
  Eigen::VectorXd y(6);
  y << 0, 1, 0, 1, 1, 0;
  CHECK_THROWS_AS(FitLogistic(collinear, y), NumericalError);
  GlmOptions o;
  o.names = {"only_one"};
  CHECK_THROWS_AS(FitLogistic(x, y, o), ValidationError);
}

TEST_CASE("fractional logit") {
  const Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(8, 1);
  const ModelFit half = FitFractionalLogit(ones, Eigen::VectorXd::Constant(8, 0.5));
  CHECK(half.beta(0) == 0.0);
  CHECK(half.quasi);
  CHECK(!half.caveat.empty());
  CHECK(half.pseudo_r2 == 0.0);

  std::mt19937_64 gen(9);
  std::normal_distribution<double> normal(0, 1);
  std::uniform_real_distribution<double> unif(0, 1);
  const int n = 400;
  Eigen::MatrixXd x(n, 3);
  Eigen::VectorXd binary(n), likert(n);
  for (int i = 0; i < n; ++i) {
    x(i, 0) = 1;
    x(i, 1) = normal(gen);
    x(i, 2) = normal(gen);
    const double eta = -0.3 + 0.9 * x(i, 1) + 0.2 * x(i, 2);
    binary(i) = unif(gen) < 1 / (1 + std::exp(-eta)) ? 1 : 0;
    const int v = std::clamp(static_cast<int>(std::lround(3 + 1.2 * x(i, 1) + normal(gen))), 1, 5);
    likert(i) = LikertToUnit(v);
  }
  const ModelFit lf = FitLogistic(x, binary);
  const ModelFit ff = FitFractionalLogit(x, binary);
  CHECK((lf.beta - ff.beta).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(std::abs(lf.loglik - ff.loglik) < 1e-9);

  const ModelFit pref = FitFractionalLogit(x, likert);
  CHECK(pref.coefficients[1].estimate > 0);
  CHECK(pref.coefficients[1].odds_ratio > 1);
  CHECK(pref.coefficients[1].or_lower > 1);
  CHECK(pref.score_residual < 1e-6);
  CHECK(pref.dispersion > 0);
  CHECK(LikertToUnit(1) == 0.0);
  CHECK(LikertToUnit(4) == 0.75);
  CHECK_THROWS_AS(LikertToUnit(6), ValidationError);
  Eigen::VectorXd bad = likert;
  bad(0) = 1.5;
  CHECK_THROWS_AS(FitFractionalLogit(x, bad), ValidationError);
}

TEST_CASE("linear model agrees with the normal equations") {
  Eigen::MatrixXd x(6, 2);
  x << 1, 0, 1, 1, 1, 2, 1, 3, 1, 4, 1, 5;
  Eigen::VectorXd y(6);
  y << 1.1, 2.9, 5.2, 7.1, 8.8, 11.2;
  const ModelFit f = FitLinear(x, y);
  const Eigen::VectorXd beta = (x.transpose() * x).inverse() * x.transpose() * y;
  CHECK((f.beta - beta).cwiseAbs().maxCoeff() < 1e-12);
  const double rss = (y - x * beta).squaredNorm();
  CHECK(std::abs(f.loglik + 3 * (std::log(2 * M_PI * rss / 6) + 1)) < 1e-12);
  CHECK(f.k == 3);
}

ModelFit Handset(int k, double loglik) {
  ModelFit f;
  f.k = k;
  f.loglik = loglik;
  return f;
}

TEST_CASE("model comparison ranks by AIC then size") {
  // AICs: a = 6 - 2(-100) = 206, b = 4 + 196 = 200, c = 8 + 192 = 200.
  const auto rows = CompareModels(
      {{"a", Handset(3, -100)}, {"c", Handset(4, -96)}, {"b", Handset(2, -98)}});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].name == "b");
  CHECK(rows[1].name == "c");
  CHECK(rows[2].name == "a");
  CHECK(rows[0].aic == 200);
  CHECK(rows[2].delta_aic == 6);
  CHECK(rows[2].rank == 3);
  const auto single = CompareModels({{"only", Handset(1, -3)}});
  CHECK(single.size() == 1);
  CHECK(single[0].rank == 1);
  CHECK(single[0].delta_aic == 0);
}

TEST_CASE("AIC prefers the smaller of two nested models when the extra column is noise") {
  std::mt19937_64 gen(77);
  std::normal_distribution<double> normal(0, 1);
  std::uniform_real_distribution<double> unif(0, 1);
  int smaller_wins = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    const int n = 1000;
    Eigen::MatrixXd x(n, 3);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      x(i, 0) = 1;
      x(i, 1) = normal(gen);
      x(i, 2) = normal(gen);
      y(i) = unif(gen) < 1 / (1 + std::exp(-0.8 * x(i, 1))) ? 1 : 0;
    }
    const auto rows =
        CompareModels({{"big", FitLogistic(x, y)}, {"small", FitLogistic(x.leftCols(2), y)}});
    if (rows[0].name == "small") ++smaller_wins;
  }
  // P(chi2_1 < 2) = 0.843.
  MESSAGE("smaller model wins " << smaller_wins << " / " << trials);
  CHECK(smaller_wins > 0.75 * trials);
}

// -- pipeline -----------------------------------------------------------------

StudyTables Simulate(StudyVariant v, int sessions) {
  StudyTables tables = EmptyStudyTables();
  for (int s = 0; s < sessions; ++s) {
    SessionInit init{"s" + std::to_string(s), "p" + std::to_string(s), StudyConfig::ForVariant(v),
                     static_cast<uint64_t>(1000 + s)};
    init.config.coplay.horizon = 100;
    Session session(init);
    ScriptedParticipant participant(static_cast<uint64_t>(s));
    SimulateSession(session, participant);
    AppendSession(session, tables);
  }
  return tables;
}

TEST_CASE("study 1 analysis on simulated sessions") {
  const StudyTables tables = Simulate(StudyVariant::kStudy1, 16);
  const StudyAnalysis a = AnalyzeStudy(tables, StudyVariant::kStudy1);
  CHECK(a.sessions == 16);
  CHECK(a.composites.scores.size() == 16u * 12);
  CHECK(a.coplayers.size() == 4);
  CHECK(a.icc.size() == 4);
  REQUIRE(a.trait_anova.has_value());
  REQUIRE(a.reliability.contains("warmth"));
  REQUIRE(a.svo_tremble_anova.contains("warmth"));
  // The synthetic participant judges warmth by how many of its coins were
  // taken, which the prosocial agents avoid.
  CHECK(a.svo_tremble_anova.at("warmth").Row("theta").p < 0.05);
  REQUIRE(a.models.size() == 4);
  REQUIRE(a.ranking.size() == 3);
  for (const auto& [name, fit] : a.models) {
    CHECK(fit.kind == ModelKind::kFractionalLogit);
    CHECK(fit.n == 16 * 6);
  }
  CHECK(a.models[2].second.Coef("warmth_diff").estimate > 0);

  const auto dir = std::filesystem::temp_directory_path() / "coins_stats_test_out";
  std::filesystem::remove_all(dir);
  WriteAnalysis(a, dir.string());
  for (const char* f : {"analysis.json", "coefficients.csv", "ranking.csv", "icc.csv",
                        "anova.csv", "composites.csv"}) {
    CHECK(std::filesystem::exists(dir / f));
  }
  std::ifstream in(dir / "analysis.json");
  const nlohmann::json j = nlohmann::json::parse(in);
  CHECK(j["ranking"].size() == 3);
  CHECK(j["icc"]["warm"]["variant"] == "ICC(1,1) one-way random effects, single rating");
  CHECK(j["models"]["perception"].contains("caveat"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("study 3 analysis uses partner choices") {
  const StudyTables tables = Simulate(StudyVariant::kStudy3, 40);
  const StudyAnalysis a = AnalyzeStudy(tables, StudyVariant::kStudy3);
  CHECK(a.sessions == 40);
  CHECK(a.composites.scores.size() == 40u);
  // One rating per co-player: no repeated measures to assess.
  CHECK(a.icc.empty());
  for (const auto& [name, fit] : a.models) {
    CHECK(fit.kind == ModelKind::kLogistic);
    CHECK(fit.n == 40);
  }
  CHECK(a.models.size() + a.notes.size() >= 4);
  CHECK(AnalyzeStudy(tables, StudyVariant::kStudy1).sessions == 0);
}

}  // namespace
}  // namespace coins
