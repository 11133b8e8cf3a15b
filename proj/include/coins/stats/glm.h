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

#ifndef COINS_STATS_GLM_H_
#define COINS_STATS_GLM_H_

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "coins/errors.h"
#include "json.hpp"

namespace coins {

// Perfect or quasi-perfect separation in a binary-response model.
class SeparationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

enum class ModelKind { kLogistic, kFractionalLogit, kLinear };

std::string ModelKindName(ModelKind kind);

struct Coefficient {
  std::string name;
  double estimate = 0.0;
  double se = 0.0;
  double statistic = 0.0;  // z for logistic, t otherwise
  double p = 0.0;
  // exp(estimate) and exp(estimate -/+ 1.96 se); unset for linear models.
  double odds_ratio = 0.0;
  double or_lower = 0.0;
  double or_upper = 0.0;
};

struct ModelFit {
  ModelKind kind = ModelKind::kLogistic;
  std::vector<Coefficient> coefficients;
  Eigen::VectorXd beta;
  Eigen::MatrixXd covariance;
  int n = 0;
  int k = 0;  // estimated parameters counted by the AIC
  double loglik = 0.0;
  double null_loglik = 0.0;  // intercept-only model
  double aic = 0.0;          // 2k - 2 loglik
  double pseudo_r2 = 0.0;
  std::string pseudo_r2_name;
  double dispersion = 1.0;
  int iterations = 0;
  bool converged = false;
  double score_residual = 0.0;  // max |X'(y - mu)| at the estimate
  // Set when loglik, AIC and pseudo R2 are quasi-likelihood quantities.
  bool quasi = false;
  std::string caveat;

  const Coefficient& Coef(const std::string& name) const;
};

struct GlmOptions {
  std::vector<std::string> names;  // default x0, x1, ...
  int max_iterations = 100;
  double tolerance = 1e-10;
};

// Maximum likelihood logistic regression by iteratively reweighted least
// squares from beta = 0, with Wald standard errors and Nagelkerke R2. The
// design matrix carries its own intercept column. Throws ValidationError for
// non-binary or constant outcomes, SeparationError when fitted
// probabilities run to 0 or 1, and NumericalError for a rank-deficient
// design or no convergence.
ModelFit FitLogistic(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                     const GlmOptions& options = {});

// Quasi-binomial regression with a logit link for outcomes in [0, 1]. The
// coefficients solve the same score equations as FitLogistic; standard
// errors are scaled by the Pearson dispersion, and the AIC and pseudo R2
// (McFadden analogue) are quasi-likelihood quantities.
ModelFit FitFractionalLogit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                            const GlmOptions& options = {});

// Ordinary least squares with a Gaussian likelihood (k counts the variance).
ModelFit FitLinear(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                   const GlmOptions& options = {});

// Maps a Likert answer 1..5 to 0, .25, .5, .75, 1.
double LikertToUnit(int value);

struct ModelComparisonRow {
  std::string name;
  int k = 0;
  double loglik = 0.0;
  double aic = 0.0;
  double delta_aic = 0.0;  // relative to the best model
  double pseudo_r2 = 0.0;
  std::string pseudo_r2_name;
  int rank = 0;  // 1 is best
};

// Ranks fits by AIC (recomputed as 2k - 2 loglik) ascending; AICs within
// 1e-9 count as tied and the model with fewer parameters ranks first.
std::vector<ModelComparisonRow> CompareModels(
    const std::vector<std::pair<std::string, ModelFit>>& fits);

nlohmann::json ModelFitToJson(const ModelFit& fit);

}  // namespace coins

#endif  // COINS_STATS_GLM_H_
