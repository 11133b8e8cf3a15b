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

#ifndef COINS_STATS_DESCRIPTIVE_H_
#define COINS_STATS_DESCRIPTIVE_H_

#include <span>

#include <Eigen/Dense>

namespace coins {

double Mean(std::span<const double> xs);

// Standard deviation with divisor n (not n - 1).
double PopulationSd(std::span<const double> xs);

// Pearson product-moment correlation. Throws ValidationError on unequal
// lengths, fewer than two pairs or a constant input.
double PearsonCorrelation(std::span<const double> x, std::span<const double> y);

// Centers every column and divides it by its population standard deviation.
// Throws ValidationError for a constant column.
Eigen::MatrixXd Standardize(const Eigen::MatrixXd& columns);

// Reliability of a two-part composite from the correlation of its parts:
// rho = 2r / (1 + r). Throws ValidationError unless -1 < r <= 1.
double SpearmanBrown(double r);

// The correlation that yields a given two-part reliability, r = rho / (2 - rho).
double SpearmanBrownInverse(double rho);

}  // namespace coins

#endif  // COINS_STATS_DESCRIPTIVE_H_
