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

#include "coins/stats/descriptive.h"

#include <cmath>
#include <numeric>

#include "coins/errors.h"

namespace coins {

double Mean(std::span<const double> xs) {
  if (xs.empty()) throw ValidationError("mean of an empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double PopulationSd(std::span<const double> xs) {
  const double m = Mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size()));
}

double PearsonCorrelation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("correlation needs paired samples");
  if (x.size() < 2) throw ValidationError("correlation needs at least two pairs");
  const double mx = Mean(x);
  const double my = Mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw ValidationError("correlation of a constant sample");
  return sxy / std::sqrt(sxx * syy);
}

Eigen::MatrixXd Standardize(const Eigen::MatrixXd& columns) {
  Eigen::MatrixXd out(columns.rows(), columns.cols());
  for (Eigen::Index j = 0; j < columns.cols(); ++j) {
    const Eigen::VectorXd c = columns.col(j);
    const double sd = PopulationSd({c.data(), static_cast<size_t>(c.size())});
    if (!(sd > 0.0)) {
      throw ValidationError("cannot standardize constant column " + std::to_string(j));
    }
    out.col(j) = (c.array() - c.mean()) / sd;
  }
  return out;
}

double SpearmanBrown(double r) {
  if (!(r > -1.0 && r <= 1.0)) {
    throw ValidationError("Spearman-Brown needs -1 < r <= 1, got " + std::to_string(r));
  }
  return 2.0 * r / (1.0 + r);
}

double SpearmanBrownInverse(double rho) {
  if (!(rho <= 1.0)) {
    throw ValidationError("reliability must be at most 1");
  }
  return rho / (2.0 - rho);
}

}  // namespace coins
