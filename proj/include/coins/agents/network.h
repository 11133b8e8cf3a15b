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

#ifndef COINS_AGENTS_NETWORK_H_
#define COINS_AGENTS_NETWORK_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "coins/env/observation.h"
#include "json.hpp"

namespace coins {

// Sparse encoding of an egocentric window: one binary feature per
// (cell, channel) with channels {blocked (wall or out of bounds), own coin,
// other coin, co-player}. The observer always sits at the centre and is
// not encoded. Returns the indices of the active features.
inline constexpr int kFeatureChannels = 4;
int FeatureDim(int radius);
std::vector<int> EncodeFeatures(const Observation& egocentric);

using ActionLogits = Eigen::Matrix<double, kNumActions, 1>;

// One-hidden-layer actor-critic: tanh trunk, softmax policy head and scalar
// value head.
class ActorCriticNet {
 public:
  struct Activations {
    Eigen::VectorXd hidden;
    ActionLogits logits;
    ActionLogits probs;
    double value = 0.0;
  };

  struct Gradients {
    Eigen::MatrixXd w_in;
    Eigen::VectorXd b_in;
    Eigen::Matrix<double, kNumActions, Eigen::Dynamic> w_pi;
    ActionLogits b_pi;
    Eigen::RowVectorXd w_v;
    double b_v = 0.0;

    void SetZero(const ActorCriticNet& shape);
    double SquaredNorm() const;
    void Scale(double factor);
  };

  ActorCriticNet() = default;
  // Uniform fan-in initialisation; the policy head starts near zero so the
  // untrained policy is close to uniform, the value head starts at zero.
  ActorCriticNet(int radius, int hidden_units, uint64_t init_seed);

  int radius() const { return radius_; }
  int input_dim() const { return static_cast<int>(w_in_.cols()); }
  int hidden_units() const { return static_cast<int>(w_in_.rows()); }

  Activations Run(std::span<const int> active) const;

  // Accumulates d(loss)/d(params) given d(loss)/d(logits) and d(loss)/d(value)
  // for one sample.
  void Backward(std::span<const int> active, const Activations& act,
                const ActionLogits& d_logits, double d_value,
                Gradients& grads) const;

  nlohmann::json ToJson() const;
  static ActorCriticNet FromJson(const nlohmann::json& j);

  friend bool operator==(const ActorCriticNet& a, const ActorCriticNet& b);

 private:
  friend class AdamOptimizer;

  int radius_ = kDefaultEgocentricRadius;
  Eigen::MatrixXd w_in_;
  Eigen::VectorXd b_in_;
  Eigen::Matrix<double, kNumActions, Eigen::Dynamic> w_pi_;
  ActionLogits b_pi_;
  Eigen::RowVectorXd w_v_;
  double b_v_ = 0.0;
};

class AdamOptimizer {
 public:
  AdamOptimizer(const ActorCriticNet& net, double learning_rate,
                double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);
  void Apply(const ActorCriticNet::Gradients& grads, ActorCriticNet& net);

 private:
  double lr_, beta1_, beta2_, eps_;
  int64_t t_ = 0;
  ActorCriticNet::Gradients m_, v_;
};

}  // namespace coins

#endif  // COINS_AGENTS_NETWORK_H_
