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

#include "coins/stats/glm.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace coins {
namespace {

constexpr double kZ95 = 1.959963984540054;
// Beyond this linear predictor the fitted probability is 1 - 1e-13 or so:
// the likelihood keeps improving by pushing coefficients to infinity.
constexpr double kSeparationEta = 30.0;

// estimate / se, with a zero standard error (a perfect fit) giving 0 for a
// zero estimate and an infinite statistic otherwise.
double Ratio(double estimate, double se) {
  if (se > 0.0) return estimate / se;
  return estimate == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), estimate);
}

double LogSigmoid(double eta) { return -std::log1p(std::exp(-eta)); }

double Sigmoid(double eta) {
  return eta >= 0 ? 1.0 / (1.0 + std::exp(-eta)) : std::exp(eta) / (1.0 + std::exp(eta));
}

// Bernoulli (quasi-)log-likelihood at linear predictor eta. Uses the stable
// log-sigmoid so that tails do not produce log(0).
double LogLikEta(const Eigen::VectorXd& y, const Eigen::VectorXd& eta) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    ll += y(i) * LogSigmoid(eta(i)) + (1.0 - y(i)) * LogSigmoid(-eta(i));
  }
  return ll;
}

double LogLikMean(const Eigen::VectorXd& y, double mu) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y(i) > 0) ll += y(i) * std::log(mu);
    if (y(i) < 1) ll += (1.0 - y(i)) * std::log1p(-mu);
  }
  return ll;
}

std::vector<std::string> Names(const GlmOptions& o, Eigen::Index p) {
  if (!o.names.empty()) {
    if (static_cast<Eigen::Index>(o.names.size()) != p) {
      throw ValidationError("expected " + std::to_string(p) + " coefficient names");
    }
    return o.names;
  }
  std::vector<std::string> out;
  for (Eigen::Index j = 0; j < p; ++j) out.push_back("x" + std::to_string(j));
  return out;
}

void CheckShapes(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (x.rows() != y.size()) throw ValidationError("design and outcome differ in length");
  if (x.cols() == 0) throw ValidationError("design matrix has no columns");
  if (x.rows() <= x.cols()) throw ValidationError("need more observations than coefficients");
  if (!x.allFinite() || !y.allFinite()) throw ValidationError("non-finite design or outcome");
}

void CheckRank(const Eigen::MatrixXd& x) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < x.cols()) throw NumericalError("design matrix is rank deficient");
}

bool IsConstantColumn(const Eigen::MatrixXd& x, double* value) {
  if (x.cols() != 1) return false;
  const double c = x(0, 0);
  if (c == 0.0 || (x.col(0).array() != c).any()) return false;
  *value = c;
  return true;
}

// Shared logit-link IRLS; fills beta, iterations and convergence.
void FitLogitIrls(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GlmOptions& o,
                  ModelFit& fit) {
  const double ybar = y.mean();
  double c = 0.0;
  if (IsConstantColumn(x, &c)) {
    // Intercept-only: the estimate is the sample logit in closed form.
    fit.beta = Eigen::VectorXd::Constant(1, std::log(ybar / (1.0 - ybar)) / c);
    fit.iterations = 0;
    fit.converged = true;
    return;
  }
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(x.cols());
  for (int it = 1; it <= o.max_iterations; ++it) {
    const Eigen::VectorXd eta = x * beta;
    Eigen::VectorXd w(y.size()), z(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double mu = Sigmoid(eta(i));
      w(i) = mu * (1.0 - mu);
      z(i) = eta(i) + (y(i) - mu) / w(i);
    }
    const Eigen::VectorXd sw = w.cwiseSqrt();
    const Eigen::MatrixXd xw = sw.asDiagonal() * x;
    const Eigen::VectorXd next = xw.colPivHouseholderQr().solve(sw.cwiseProduct(z));
    if (!next.allFinite()) throw NumericalError("IRLS produced non-finite coefficients");
    const double change = (next - beta).cwiseAbs().maxCoeff();
    beta = next;
    if ((x * beta).cwiseAbs().maxCoeff() > kSeparationEta) {
      throw SeparationError(
          "fitted probabilities reached 0 or 1: the outcome is (quasi-)perfectly separated");
    }
    if (change <= o.tolerance * (1.0 + beta.cwiseAbs().maxCoeff())) {
      fit.beta = beta;
      fit.iterations = it;
      fit.converged = true;
      return;
    }
  }
  throw NumericalError("IRLS did not converge in " + std::to_string(o.max_iterations) +
                       " iterations");
}

ModelFit FitLogitFamily(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                        const GlmOptions& o, bool quasi) {
  CheckShapes(x, y);
  const auto names = Names(o, x.cols());
  const double ybar = y.mean();
  if (!(ybar > 0.0 && ybar < 1.0)) {
    throw ValidationError("outcome must vary strictly inside [0, 1]");
  }
  CheckRank(x);
  ModelFit fit;
  fit.kind = quasi ? ModelKind::kFractionalLogit : ModelKind::kLogistic;
  fit.n = static_cast<int>(y.size());
  fit.k = static_cast<int>(x.cols());
  FitLogitIrls(x, y, o, fit);

  const Eigen::VectorXd eta = x * fit.beta;
  Eigen::VectorXd mu(y.size()), w(y.size());
  double c = 0.0;
  const bool intercept_only = IsConstantColumn(x, &c);
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    mu(i) = intercept_only ? ybar : Sigmoid(eta(i));
    w(i) = mu(i) * (1.0 - mu(i));
  }
  fit.null_loglik = LogLikMean(y, ybar);
  fit.loglik = intercept_only ? fit.null_loglik : LogLikEta(y, eta);
  fit.score_residual = (x.transpose() * (y - mu)).cwiseAbs().maxCoeff();
  const Eigen::MatrixXd info = x.transpose() * w.asDiagonal() * x;
  fit.covariance = info.ldlt().solve(Eigen::MatrixXd::Identity(x.cols(), x.cols()));
  if (quasi) {
    double pearson = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) pearson += (y(i) - mu(i)) * (y(i) - mu(i)) / w(i);
    fit.dispersion = pearson / static_cast<double>(fit.n - fit.k);
    fit.covariance *= fit.dispersion;
  }
  fit.aic = 2.0 * fit.k - 2.0 * fit.loglik;
  const double n = fit.n;
  if (quasi) {
    fit.quasi = true;
    fit.pseudo_r2_name = "mcfadden_quasi";
    fit.pseudo_r2 = 1.0 - fit.loglik / fit.null_loglik;
    fit.caveat =
        "quasi-binomial fit: log-likelihood and AIC are Bernoulli quasi-likelihood values and "
        "the pseudo R2 is a McFadden analogue, not a marginal R2 from a mixed model";
  } else {
    fit.pseudo_r2_name = "nagelkerke";
    const double cox_snell = 1.0 - std::exp(2.0 * (fit.null_loglik - fit.loglik) / n);
    const double max_cs = 1.0 - std::exp(2.0 * fit.null_loglik / n);
    fit.pseudo_r2 = cox_snell / max_cs;
  }
  const boost::math::normal normal;
  const boost::math::students_t t(std::max(1, fit.n - fit.k));
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    Coefficient cf;
    cf.name = names[j];
    cf.estimate = fit.beta(j);
    cf.se = std::sqrt(fit.covariance(j, j));
    cf.statistic = Ratio(cf.estimate, cf.se);
    const double tail = quasi ? boost::math::cdf(boost::math::complement(t, std::abs(cf.statistic)))
                              : boost::math::cdf(boost::math::complement(normal, std::abs(cf.statistic)));
    cf.p = 2.0 * tail;
    cf.odds_ratio = std::exp(cf.estimate);
    cf.or_lower = std::exp(cf.estimate - kZ95 * cf.se);
    cf.or_upper = std::exp(cf.estimate + kZ95 * cf.se);
    fit.coefficients.push_back(cf);
  }
  return fit;
}

}  // namespace

std::string ModelKindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kLogistic: return "logistic";
    case ModelKind::kFractionalLogit: return "fractional_logit";
    case ModelKind::kLinear: return "linear";
  }
  return "unknown";
}

const Coefficient& ModelFit::Coef(const std::string& name) const {
  for (const Coefficient& c : coefficients) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no coefficient '" + name + "'");
}

ModelFit FitLogistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                     const GlmOptions& options) {
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y(i) != 0.0 && y(i) != 1.0) throw ValidationError("logistic outcome must be 0 or 1");
  }
  return FitLogitFamily(x, y, options, false);
}

ModelFit FitFractionalLogit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                            const GlmOptions& options) {
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (!(y(i) >= 0.0 && y(i) <= 1.0)) {
      throw ValidationError("fractional outcome must lie in [0, 1]");
    }
  }
  return FitLogitFamily(x, y, options, true);
}

ModelFit FitLinear(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                   const GlmOptions& options) {
  CheckShapes(x, y);
  const auto names = Names(options, x.cols());
  CheckRank(x);
  ModelFit fit;
  fit.kind = ModelKind::kLinear;
  fit.n = static_cast<int>(y.size());
  fit.k = static_cast<int>(x.cols()) + 1;
  fit.beta = x.colPivHouseholderQr().solve(y);
  fit.iterations = 1;
  fit.converged = true;
  const Eigen::VectorXd resid = y - x * fit.beta;
  const double rss = resid.squaredNorm();
  const double tss = (y.array() - y.mean()).square().sum();
  const double n = fit.n;
  if (!(rss > 0.0)) throw NumericalError("linear model fits exactly: zero residual variance");
  fit.loglik = -0.5 * n * (std::log(2.0 * M_PI * rss / n) + 1.0);
  fit.null_loglik = -0.5 * n * (std::log(2.0 * M_PI * tss / n) + 1.0);
  fit.aic = 2.0 * fit.k - 2.0 * fit.loglik;
  fit.pseudo_r2_name = "r2";
  fit.pseudo_r2 = tss > 0 ? 1.0 - rss / tss : 0.0;
  const double df = n - static_cast<double>(x.cols());
  fit.dispersion = rss / df;
  fit.covariance = fit.dispersion * (x.transpose() * x).ldlt().solve(
                                        Eigen::MatrixXd::Identity(x.cols(), x.cols()));
  fit.score_residual = (x.transpose() * resid).cwiseAbs().maxCoeff();
  const boost::math::students_t t(df);
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    Coefficient cf;
    cf.name = names[j];
    cf.estimate = fit.beta(j);
    cf.se = std::sqrt(fit.covariance(j, j));
    cf.statistic = Ratio(cf.estimate, cf.se);
    cf.p = 2.0 * boost::math::cdf(boost::math::complement(t, std::abs(cf.statistic)));
    fit.coefficients.push_back(cf);
  }
  return fit;
}

double LikertToUnit(int value) {
  if (value < 1 || value > 5) {
    throw ValidationError("Likert value " + std::to_string(value) + " outside 1..5");
  }
  return (value - 1) / 4.0;
}

std::vector<ModelComparisonRow> CompareModels(
    const std::vector<std::pair<std::string, ModelFit>>& fits) {
  std::vector<ModelComparisonRow> rows;
  for (const auto& [name, fit] : fits) {
    rows.push_back({name, fit.k, fit.loglik, 2.0 * fit.k - 2.0 * fit.loglik, 0.0, fit.pseudo_r2,
                    fit.pseudo_r2_name, 0});
  }
  auto tied = [](double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
  };
  std::stable_sort(rows.begin(), rows.end(),
                   [&](const ModelComparisonRow& a, const ModelComparisonRow& b) {
                     if (!tied(a.aic, b.aic)) return a.aic < b.aic;
                     return a.k < b.k;
                   });
  for (size_t i = 0; i < rows.size(); ++i) {
    rows[i].rank = static_cast<int>(i) + 1;
    rows[i].delta_aic = rows[i].aic - rows.front().aic;
  }
  return rows;
}

nlohmann::json ModelFitToJson(const ModelFit& fit) {
  nlohmann::json coefs = nlohmann::json::array();
  for (const Coefficient& c : fit.coefficients) {
    nlohmann::json j = {{"name", c.name},
                        {"estimate", c.estimate},
                        {"se", c.se},
                        {"statistic", c.statistic},
                        {"p", c.p}};
    if (fit.kind != ModelKind::kLinear) {
      j["odds_ratio"] = c.odds_ratio;
      j["or_ci"] = {c.or_lower, c.or_upper};
    }
    coefs.push_back(j);
  }
  nlohmann::json j = {{"kind", ModelKindName(fit.kind)},
                      {"n", fit.n},
                      {"k", fit.k},
                      {"loglik", fit.loglik},
                      {"null_loglik", fit.null_loglik},
                      {"aic", fit.aic},
                      {"pseudo_r2", fit.pseudo_r2},
                      {"pseudo_r2_name", fit.pseudo_r2_name},
                      {"dispersion", fit.dispersion},
                      {"iterations", fit.iterations},
                      {"converged", fit.converged},
                      {"score_residual", fit.score_residual},
                      {"coefficients", coefs}};
  if (fit.quasi) j["caveat"] = fit.caveat;
  return j;
}

}  // namespace coins
