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

#include "coins/agents/policy.h"

#include <fstream>
#include <mutex>

#include "coins/agents/learner.h"
#include "coins/agents/scripted.h"
#include "coins/errors.h"

namespace coins {

PolicySpec PolicySpec::Scripted(double theta, double epsilon) {
  PolicySpec s;
  s.kind = theta >= kProsocialTheta ? Kind::kScriptedProsocial
                                    : Kind::kScriptedSelfish;
  s.svo.theta_degrees = theta;
  s.tremble.epsilon = epsilon;
  return s;
}

namespace {

constexpr std::pair<PolicySpec::Kind, const char*> kKindNames[] = {
    {PolicySpec::Kind::kScriptedSelfish, "scripted_selfish"},
    {PolicySpec::Kind::kScriptedProsocial, "scripted_prosocial"},
    {PolicySpec::Kind::kLearned, "learned"},
    {PolicySpec::Kind::kNoOp, "no_op"},
    {PolicySpec::Kind::kUniformRandom, "uniform_random"},
};

}  // namespace

std::string KindName(PolicySpec::Kind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

void to_json(nlohmann::json& j, const PolicySpec& spec) {
  j = {{"kind", KindName(spec.kind)},
       {"theta", spec.svo.theta_degrees},
       {"epsilon", spec.tremble.epsilon}};
  if (spec.kind == PolicySpec::Kind::kLearned) {
    j["checkpoint"] = spec.checkpoint;
    j["agent"] = spec.agent_index;
  }
}

void from_json(const nlohmann::json& j, PolicySpec& spec) {
  const std::string kind = j.at("kind").get<std::string>();
  bool found = false;
  for (const auto& [k, name] : kKindNames) {
    if (kind == name) {
      spec.kind = k;
      found = true;
    }
  }
  if (!found) throw ConfigError("unknown policy kind '" + kind + "'");
  spec.svo.theta_degrees = j.value("theta", 0.0);
  spec.tremble.epsilon = j.value("epsilon", 0.0);
  if (spec.svo.theta_degrees < 0 || spec.svo.theta_degrees > 90) {
    throw ConfigError("theta must lie in [0, 90]");
  }
  if (spec.tremble.epsilon < 0 || spec.tremble.epsilon > 1) {
    throw ConfigError("epsilon must lie in [0, 1]");
  }
  spec.checkpoint = j.value("checkpoint", std::string());
  spec.agent_index = j.value("agent", 0);
}

Action ScriptedSelfish::SelectAction(const Observation& obs, PolicyMemory&,
                                     Rng&) const {
  return ScriptedSelfishPolicy(obs);
}

Action ScriptedProsocial::SelectAction(const Observation& obs, PolicyMemory&,
                                       Rng&) const {
  return ScriptedProsocialPolicy(obs);
}

int SampleCategorical(const ActionLogits& probs, Rng& rng) {
  const double u = rng.Uniform();
  double cumulative = 0.0;
  for (int i = 0; i < kNumActions - 1; ++i) {
    cumulative += probs[i];
    if (u < cumulative) return i;
  }
  return kNumActions - 1;
}

Action LearnedPolicy::SelectAction(const Observation& obs, PolicyMemory&,
                                   Rng& rng) const {
  const std::vector<int> active = EncodeFeatures(obs);
  return static_cast<Action>(SampleCategorical(net_->Run(active).probs, rng));
}

namespace {

// Checkpoints are immutable once written, so loaded networks are cached by
// (path, agent).
std::shared_ptr<const ActorCriticNet> LoadNetwork(const std::string& path,
                                                  int agent) {
  static std::mutex mu;
  static std::map<std::pair<std::string, int>,
                  std::shared_ptr<const ActorCriticNet>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(path, agent);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  const Checkpoint ckpt = LoadCheckpoint(path);
  if (agent < 0 || agent >= static_cast<int>(ckpt.agents.size())) {
    throw ConfigError("checkpoint " + path + " has no agent " +
                      std::to_string(agent));
  }
  auto net = std::make_shared<const ActorCriticNet>(ckpt.agents[agent].net);
  cache.emplace(key, net);
  return net;
}

}  // namespace

std::shared_ptr<const Policy> MakePolicy(const PolicySpec& spec) {
  switch (spec.kind) {
    case PolicySpec::Kind::kScriptedSelfish:
      return std::make_shared<ScriptedSelfish>();
    case PolicySpec::Kind::kScriptedProsocial:
      return std::make_shared<ScriptedProsocial>();
    case PolicySpec::Kind::kNoOp:
      return std::make_shared<NoOpPolicy>();
    case PolicySpec::Kind::kUniformRandom:
      return std::make_shared<UniformRandomPolicy>();
    case PolicySpec::Kind::kLearned:
      if (spec.checkpoint.empty()) {
        throw ConfigError("learned policy spec without a checkpoint");
      }
      return std::make_shared<LearnedPolicy>(
          LoadNetwork(spec.checkpoint, spec.agent_index));
  }
  throw ConfigError("unhandled policy kind");
}

Action Act(const Policy& policy, TremblingParams tremble, const Observation& obs,
           PolicyMemory& memory, Rng& rng) {
  return Tremble(policy.SelectAction(obs, memory, rng), tremble, rng);
}

Roster RosterFromJson(const nlohmann::json& j) {
  Roster roster;
  for (const auto& [label, spec] : j.items()) {
    roster.emplace(label, spec.get<PolicySpec>());
  }
  return roster;
}

nlohmann::json RosterToJson(const Roster& roster) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [label, spec] : roster) j[label] = spec;
  return j;
}

Roster LoadRoster(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open roster file " + path);
  try {
    return RosterFromJson(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed roster file " + path + ": " + e.what());
  }
}

Roster DefaultRoster() {
  return {{"A", PolicySpec::Scripted(0.0, 0.0)},
          {"B", PolicySpec::Scripted(0.0, 0.5)},
          {"C", PolicySpec::Scripted(45.0, 0.0)},
          {"D", PolicySpec::Scripted(45.0, 0.5)}};
}

}  // namespace coins
