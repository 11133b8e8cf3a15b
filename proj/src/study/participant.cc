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

#include "coins/study/participant.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <filesystem>

#include "coins/agents/scripted.h"
#include "coins/env/observation.h"
#include "coins/errors.h"
#include "coins/study/store.h"

namespace coins {

using nlohmann::json;

namespace {

json ClientMessage(std::string_view type) {
  return json{{"type", type}, {"v", kProtocolVersion}};
}

}  // namespace

ScriptedParticipant::ScriptedParticipant(uint64_t seed, Options options)
    : rng_(seed), options_(std::move(options)) {}

json ScriptedParticipant::Hello() const { return ClientMessage("hello"); }

int ScriptedParticipant::Likert(double latent) {
  const double noisy = latent + (rng_.Uniform() - 0.5);
  return static_cast<int>(std::clamp(std::lround(noisy), 1L, 5L));
}

std::vector<json> ScriptedParticipant::OnMessage(const json& m) {
  const std::string type = m.value("type", "");
  if (type == "frame") {
    self_color_ = m["colors"]["self"].get<std::string>();
    for (const json& e : m["ticker"]) {
      const int step = e["step"].get<int>();
      if (step <= last_ticker_step_) continue;
      last_ticker_step_ = step;
      if (e["collector"] == "co_player") {
        ++collected_[current_co_player_];
        if (e["coin"] == self_color_) ++taken_[current_co_player_];
      }
    }
    if (rng_.Uniform() >= options_.key_rate) return {};
    const Observation obs = ParseAscii(m["grid"].get<std::vector<std::string>>());
    const Action a = rng_.Uniform() < options_.prosocial_rate ? ScriptedProsocialPolicy(obs)
                                                              : ScriptedSelfishPolicy(obs);
    json key = ClientMessage("key_input");
    key["action"] = ActionName(a);
    return {key};
  }
  if (type == "prompt") return {Reply(m)};
  if (type == "bonus") {
    bonus_cents_ = m["cents"].get<int64_t>();
    finished_ = true;
  }
  return {};
}

std::vector<json> ScriptedParticipant::OnBatch(const std::vector<json>& batch) {
  std::vector<json> replies;
  for (const json& m : batch) {
    if (m.value("type", "") == "phase") {
      const std::string name = m["name"].get<std::string>();
      if (name != "tutorial" && name != "episode") {
        std::erase_if(replies, [](const json& r) { return r["type"] == "key_input"; });
      }
    }
    for (json& r : OnMessage(m)) replies.push_back(std::move(r));
  }
  return replies;
}

json ScriptedParticipant::Reply(const json& prompt) {
  const std::string kind = prompt["kind"].get<std::string>();
  json r = ClientMessage(kind == "instructions" ? "instruction_ack" : "response");
  r["prompt_id"] = prompt["prompt_id"];
  if (kind == "instructions") {
    if (prompt.value("page", "") == "episode_intro") {
      current_co_player_ = prompt["co_player"].is_string()
                               ? prompt["co_player"].get<std::string>()
                               : std::string();
      taken_[current_co_player_] = 0;
      collected_[current_co_player_] = 0;
      last_ticker_step_ = -1;
    } else if (prompt.value("page", "") == "rules") {
      last_ticker_step_ = -1;
    }
    return r;
  }
  r["kind"] = kind;
  if (kind == "perception") {
    const std::string c = prompt["co_player"].get<std::string>();
    const double warmth = 4.0 - 0.6 * taken_[c];
    const double competence = 2.0 + 0.25 * collected_[c];
    warmth_[c] = warmth;
    r["items"] = {{"warm", Likert(warmth)},
                  {"well_intentioned", Likert(warmth)},
                  {"competent", Likert(competence)},
                  {"intelligent", Likert(competence)}};
  } else if (kind == "preference") {
    const double diff = warmth_[prompt["pair"][1].get<std::string>()] -
                        warmth_[prompt["pair"][0].get<std::string>()];
    r["value"] = Likert(3.0 + 0.8 * diff);
  } else if (kind == "partner_choice") {
    std::string choice = options_.choice_override;
    if (choice.empty()) {
      const double w = warmth_[prompt["co_player"].get<std::string>()];
      choice = w + (rng_.Uniform() - 0.5) * 2 >= 3.0 ? "play_with_coplayer" : "play_alone";
    }
    r["choice"] = choice;
  } else if (kind == "free_text") {
    json answers = json::object();
    for (const json& c : prompt["items"]) {
      const std::string color = c.get<std::string>();
      answers[color] = rng_.Uniform() < options_.empty_impression_rate
                           ? ""
                           : "The " + color + " player " +
                                 (warmth_[color] >= 3 ? "left my coins alone."
                                                      : "kept taking my coins.");
    }
    r["answers"] = answers;
  } else {
    throw ProtocolError("unknown prompt kind '" + kind + "'");
  }
  return r;
}

int64_t SimulateSession(Session& session, ScriptedParticipant& participant,
                        const std::function<void(const ClientEvent&)>& on_event) {
  std::deque<std::vector<json>> inbox;
  auto deliver = [&](const ClientEvent& e) {
    inbox.push_back(session.Handle(e));
    if (on_event) on_event(e);
  };
  deliver(ParseClientMessage(participant.Hello().dump()));
  int64_t ticks = 0;
  while (!participant.finished()) {
    if (inbox.empty()) {
      if (!session.live()) throw ProtocolError("session stalled in " + PhaseName(session.phase()));
      deliver(ClientEvent{"tick"});
      ++ticks;
      continue;
    }
    const std::vector<json> batch = std::move(inbox.front());
    inbox.pop_front();
    for (const json& reply : participant.OnBatch(batch)) {
      deliver(ParseClientMessage(reply.dump()));
    }
  }
  return ticks;
}

std::vector<std::string> SimulateStudy(const StudyConfig& config, int sessions, uint64_t seed,
                                       const std::string& log_dir) {
  if (sessions < 0) throw ConfigError("session count must be non-negative");
  config.Validate();
  std::filesystem::create_directories(log_dir);
  std::vector<std::string> ids;
  for (int i = 0; i < sessions; ++i) {
    SessionInit init;
    init.session_id = "sim-" + std::to_string(seed) + "-" + std::to_string(i);
    init.participant_id = "synthetic-" + std::to_string(i);
    init.config = config;
    init.seed = DeriveSeed(seed, static_cast<uint64_t>(i));
    SessionLogWriter writer(SessionLogPath(log_dir, init.session_id));
    if (writer.next_seq() != 0) {
      throw ConfigError("session log for '" + init.session_id + "' already exists");
    }
    writer.Append("session_start", SessionInitToJson(init));
    Session session(init);
    ScriptedParticipant participant(DeriveSeed(init.seed, 7));
    SimulateSession(session, participant,
                    [&](const ClientEvent& e) { writer.Append(e.type, e.payload); });
    ids.push_back(init.session_id);
  }
  return ids;
}

}  // namespace coins
