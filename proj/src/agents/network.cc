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

#include "coins/agents/network.h"

#include <cmath>

#include "coins/env/rng.h"
#include "coins/errors.h"

namespace coins {

int FeatureDim(int radius) {
  const int side = 2 * radius + 1;
  return side * side * kFeatureChannels;
}

std::vector<int> EncodeFeatures(const Observation& obs) {
  std::vector<int> active;
  active.reserve(obs.cells.size());
  for (size_t i = 0; i < obs.cells.size(); ++i) {
    int channel;
    switch (obs.cells[i]) {
      case ObsCode::kOutOfBounds:
      case ObsCode::kWall: channel = 0; break;
      case ObsCode::kCoinOwn: channel = 1; break;
      case ObsCode::kCoinOther: channel = 2; break;
      case ObsCode::kCoPlayer: channel = 3; break;
      default: continue;
    }
    active.push_back(static_cast<int>(i) * kFeatureChannels + channel);
  }
  return active;
}

ActorCriticNet::ActorCriticNet(int radius, int hidden_units, uint64_t init_seed)
    : radius_(radius) {
  if (radius < 1 || hidden_units < 1) {
    throw ConfigError("network needs radius >= 1 and hidden_units >= 1");
  }
  const int inputs = FeatureDim(radius);
  Rng rng(init_seed);
  auto uniform = [&](double limit) { return (2.0 * rng.Uniform() - 1.0) * limit; };
  // Roughly a quarter of the window is active at a time.
  const double in_limit = std::sqrt(6.0 / (inputs / 4.0 + hidden_units));
  w_in_.resize(hidden_units, inputs);
  for (Eigen::Index c = 0; c < w_in_.cols(); ++c) {
    for (Eigen::Index r = 0; r < w_in_.rows(); ++r) w_in_(r, c) = uniform(in_limit);
  }
  b_in_ = Eigen::VectorXd::Zero(hidden_units);
  w_pi_.resize(kNumActions, hidden_units);
  for (Eigen::Index c = 0; c < w_pi_.cols(); ++c) {
    for (Eigen::Index r = 0; r < kNumActions; ++r) w_pi_(r, c) = uniform(0.01);
  }
  b_pi_.setZero();
  w_v_ = Eigen::RowVectorXd::Zero(hidden_units);
  b_v_ = 0.0;
}

ActorCriticNet::Activations ActorCriticNet::Run(std::span<const int> active) const {
  Activations a;
  Eigen::VectorXd pre = b_in_;
  for (int idx : active) pre += w_in_.col(idx);
  a.hidden = pre.array().tanh().matrix();
  a.logits = w_pi_ * a.hidden + b_pi_;
  const double max_logit = a.logits.maxCoeff();
  a.probs = (a.logits.array() - max_logit).exp().matrix();
  a.probs /= a.probs.sum();
  a.value = w_v_.dot(a.hidden) + b_v_;
  return a;
}

void ActorCriticNet::Backward(std::span<const int> active, const Activations& act,
                              const ActionLogits& d_logits, double d_value,
                              Gradients& g) const {
  g.w_pi += d_logits * act.hidden.transpose();
  g.b_pi += d_logits;
  g.w_v += d_value * act.hidden.transpose();
  g.b_v += d_value;
  Eigen::VectorXd d_hidden = w_pi_.transpose() * d_logits + w_v_.transpose() * d_value;
  const Eigen::VectorXd d_pre =
      (d_hidden.array() * (1.0 - act.hidden.array().square())).matrix();
  g.b_in += d_pre;
  for (int idx : active) g.w_in.col(idx) += d_pre;
}

void ActorCriticNet::Gradients::SetZero(const ActorCriticNet& net) {
  w_in = Eigen::MatrixXd::Zero(net.w_in_.rows(), net.w_in_.cols());
  b_in = Eigen::VectorXd::Zero(net.b_in_.size());
  w_pi = Eigen::Matrix<double, kNumActions, Eigen::Dynamic>::Zero(kNumActions,
                                                                 net.w_pi_.cols());
  b_pi.setZero();
  w_v = Eigen::RowVectorXd::Zero(net.w_v_.size());
  b_v = 0.0;
}

double ActorCriticNet::Gradients::SquaredNorm() const {
  return w_in.squaredNorm() + b_in.squaredNorm() + w_pi.squaredNorm() +
         b_pi.squaredNorm() + w_v.squaredNorm() + b_v * b_v;
}

void ActorCriticNet::Gradients::Scale(double f) {
  w_in *= f;
  b_in *= f;
  w_pi *= f;
  b_pi *= f;
  w_v *= f;
  b_v *= f;
}

namespace {

template <typename M>
nlohmann::json MatrixToJson(const M& m) {
  std::vector<double> data(m.data(), m.data() + m.size());
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

template <typename M>
void MatrixFromJson(const nlohmann::json& j, M& m) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw ConfigError("checkpoint matrix has the wrong number of entries");
  }
  m.resize(rows, cols);
  std::copy(data.begin(), data.end(), m.data());
}

}  // namespace

nlohmann::json ActorCriticNet::ToJson() const {
  return {{"radius", radius_},
          {"w_in", MatrixToJson(w_in_)},
          {"b_in", MatrixToJson(b_in_)},
          {"w_pi", MatrixToJson(w_pi_)},
          {"b_pi", MatrixToJson(b_pi_)},
          {"w_v", MatrixToJson(w_v_)},
          {"b_v", b_v_}};
}

ActorCriticNet ActorCriticNet::FromJson(const nlohmann::json& j) {
  ActorCriticNet net;
  net.radius_ = j.at("radius").get<int>();
  MatrixFromJson(j.at("w_in"), net.w_in_);
  MatrixFromJson(j.at("b_in"), net.b_in_);
  MatrixFromJson(j.at("w_pi"), net.w_pi_);
  MatrixFromJson(j.at("b_pi"), net.b_pi_);
  MatrixFromJson(j.at("w_v"), net.w_v_);
  net.b_v_ = j.at("b_v").get<double>();
  if (net.w_in_.cols() != FeatureDim(net.radius_) ||
      net.w_pi_.cols() != net.w_in_.rows() ||
      net.w_v_.size() != net.w_in_.rows() || net.b_in_.size() != net.w_in_.rows()) {
    throw ConfigError("checkpoint network shapes are inconsistent");
  }
  return net;
}

bool operator==(const ActorCriticNet& a, const ActorCriticNet& b) {
  return a.radius_ == b.radius_ && a.w_in_ == b.w_in_ && a.b_in_ == b.b_in_ &&
         a.w_pi_ == b.w_pi_ && a.b_pi_ == b.b_pi_ && a.w_v_ == b.w_v_ &&
         a.b_v_ == b.b_v_;
}

AdamOptimizer::AdamOptimizer(const ActorCriticNet& net, double learning_rate,
                             double beta1, double beta2, double eps)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(eps) {
  m_.SetZero(net);
  v_.SetZero(net);
}

void AdamOptimizer::Apply(const ActorCriticNet::Gradients& g, ActorCriticNet& net) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  const double step = lr_ * std::sqrt(c2) / c1;
  auto update = [&](auto& param, auto& m, auto& v, const auto& grad) {
    m = beta1_ * m + (1.0 - beta1_) * grad;
    v = beta2_ * v + (1.0 - beta2_) * grad.cwiseProduct(grad);
    param.array() -= step * m.array() / (v.array().sqrt() + eps_);
  };
  update(net.w_in_, m_.w_in, v_.w_in, g.w_in);
  update(net.b_in_, m_.b_in, v_.b_in, g.b_in);
  update(net.w_pi_, m_.w_pi, v_.w_pi, g.w_pi);
  update(net.b_pi_, m_.b_pi, v_.b_pi, g.b_pi);
  update(net.w_v_, m_.w_v, v_.w_v, g.w_v);
  m_.b_v = beta1_ * m_.b_v + (1.0 - beta1_) * g.b_v;
  v_.b_v = beta2_ * v_.b_v + (1.0 - beta2_) * g.b_v * g.b_v;
  net.b_v_ -= step * m_.b_v / (std::sqrt(v_.b_v) + eps_);
}

}  // namespace coins
