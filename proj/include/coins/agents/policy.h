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

#ifndef COINS_AGENTS_POLICY_H_
#define COINS_AGENTS_POLICY_H_

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "coins/agents/network.h"
#include "coins/agents/svo.h"
#include "coins/agents/tremble.h"
#include "coins/env/observation.h"
#include "coins/env/rng.h"
#include "json.hpp"

namespace coins {

// A co-player as parameterised for evaluation and co-play.
struct PolicySpec {
  enum class Kind {
    kScriptedSelfish,
    kScriptedProsocial,
    kLearned,
    kNoOp,           // test fixture: always no_op
    kUniformRandom,  // test fixture: uniform over the five actions
  };

  Kind kind = Kind::kScriptedSelfish;
  SvoParams svo;
  TremblingParams tremble;
  std::string checkpoint;  // kLearned: checkpoint file
  int agent_index = 0;     // kLearned: which agent inside the checkpoint

  // Scripted stand-in for a trained agent: theta >= 45 maps to the
  // prosocial oracle, otherwise the selfish one.
  static PolicySpec Scripted(double theta, double epsilon);

  friend bool operator==(const PolicySpec&, const PolicySpec&) = default;
};

std::string KindName(PolicySpec::Kind kind);
void to_json(nlohmann::json& j, const PolicySpec& spec);
void from_json(const nlohmann::json& j, PolicySpec& spec);

// Opaque per-episode state. The feedforward and scripted policies here keep
// nothing in it, but it is threaded through so recurrent policies can.
struct PolicyMemory {
  std::vector<double> state;
  void Reset() { state.clear(); }
};

// Base (untrembled) policy. Immutable after construction, so a single
// instance may be shared across threads.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual Frame frame() const = 0;
  virtual int radius() const { return kDefaultEgocentricRadius; }
  virtual Action SelectAction(const Observation& obs, PolicyMemory& memory,
                              Rng& rng) const = 0;
};

class ScriptedSelfish : public Policy {
 public:
  Frame frame() const override { return Frame::kAllocentric; }
  Action SelectAction(const Observation& obs, PolicyMemory&, Rng&) const override;
};

class ScriptedProsocial : public Policy {
 public:
  Frame frame() const override { return Frame::kAllocentric; }
  Action SelectAction(const Observation& obs, PolicyMemory&, Rng&) const override;
};

class NoOpPolicy : public Policy {
 public:
  Frame frame() const override { return Frame::kAllocentric; }
  Action SelectAction(const Observation&, PolicyMemory&, Rng&) const override {
    return Action::kNoOp;
  }
};

class UniformRandomPolicy : public Policy {
 public:
  Frame frame() const override { return Frame::kAllocentric; }
  Action SelectAction(const Observation&, PolicyMemory&, Rng& rng) const override {
    return static_cast<Action>(rng.UniformInt(kNumActions));
  }
};

// Samples from the actor-critic's softmax over an egocentric window.
class LearnedPolicy : public Policy {
 public:
  explicit LearnedPolicy(std::shared_ptr<const ActorCriticNet> net)
      : net_(std::move(net)) {}
  Frame frame() const override { return Frame::kEgocentric; }
  int radius() const override { return net_->radius(); }
  Action SelectAction(const Observation& obs, PolicyMemory&, Rng& rng) const override;
  const ActorCriticNet& net() const { return *net_; }

 private:
  std::shared_ptr<const ActorCriticNet> net_;
};

// Samples an index from a probability vector with one uniform draw.
int SampleCategorical(const ActionLogits& probs, Rng& rng);

// Resolves a spec into its base policy. Learned specs load their checkpoint
// (throws ConfigError when it is missing or unreadable).
std::shared_ptr<const Policy> MakePolicy(const PolicySpec& spec);

// Base action followed by the trembling hand.
Action Act(const Policy& policy, TremblingParams tremble, const Observation& obs,
           PolicyMemory& memory, Rng& rng);

// A base policy bound to its spec's trembling parameter.
struct Agent {
  PolicySpec spec;
  std::shared_ptr<const Policy> policy;

  static Agent FromSpec(const PolicySpec& spec) { return {spec, MakePolicy(spec)}; }
  Action Act(const Observation& obs, PolicyMemory& memory, Rng& rng) const {
    return coins::Act(*policy, spec.tremble, obs, memory, rng);
  }
};

// Label -> spec mapping loaded from a roster file, e.g.
//   {"A": {"kind": "scripted_selfish", "theta": 0, "epsilon": 0}, ...}
using Roster = std::map<std::string, PolicySpec>;
Roster LoadRoster(const std::string& path);
Roster RosterFromJson(const nlohmann::json& j);
nlohmann::json RosterToJson(const Roster& roster);
// The four co-play agents: theta in {0, 45} x epsilon in {0, 0.5}, as
// scripted stand-ins, labelled A..D.
Roster DefaultRoster();

}  // namespace coins

#endif  // COINS_AGENTS_POLICY_H_
