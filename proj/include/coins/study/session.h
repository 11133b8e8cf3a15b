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

#ifndef COINS_STUDY_SESSION_H_
#define COINS_STUDY_SESSION_H_

#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coins/agents/policy.h"
#include "coins/env/game.h"
#include "coins/env/rng.h"
#include "coins/study/config.h"
#include "coins/study/sequence.h"
#include "json.hpp"

namespace coins {

inline constexpr int kProtocolVersion = 1;

inline constexpr std::array<std::string_view, 4> kPerceptionItems = {
    "warm", "well_intentioned", "competent", "intelligent"};
inline constexpr int kLikertMin = 1;
inline constexpr int kLikertMax = 5;
inline constexpr int kTickerLength = 3;
inline constexpr size_t kMaxFreeTextLength = 5000;

enum class Phase {
  kInstructions,
  kTutorial,
  kRules,
  kEpisodeIntro,
  kEpisode,
  kPerception,
  kPreference,
  kPartnerChoice,
  kDebrief,
  kComplete,
};

std::string PhaseName(Phase phase);

// One inbound event. `type` is one of hello, instruction_ack, key_input,
// response (from the participant) or tick (from the session's clock).
struct ClientEvent {
  std::string type;
  nlohmann::json payload = nlohmann::json::object();
};

// Parses one wire message from a client. Ticks are never accepted from the
// wire. Throws ProtocolError on malformed JSON, a missing or unknown type or
// a version mismatch.
ClientEvent ParseClientMessage(std::string_view text);

struct PerceptionResponse {
  int episode = 0;
  std::string co_player;
  std::vector<std::string> order;  // item presentation order
  std::map<std::string, int> items;
  friend bool operator==(const PerceptionResponse&, const PerceptionResponse&) = default;
};

// value 1 = strong preference for `first`, 5 = strong preference for `second`.
struct PreferenceResponse {
  int index = 0;  // 1-based prompt number
  std::string first;
  std::string second;
  int first_episode = 0;
  int second_episode = 0;
  int value = 0;
  friend bool operator==(const PreferenceResponse&, const PreferenceResponse&) = default;
};

struct PartnerChoice {
  std::string co_player;
  bool play_alone = false;
  friend bool operator==(const PartnerChoice&, const PartnerChoice&) = default;
};

struct Impression {
  std::string co_player;
  std::string text;
  friend bool operator==(const Impression&, const Impression&) = default;
};

// Participant-side summary of one finished episode. Episode 0 is the
// tutorial; co-play episodes are numbered from 1.
struct EpisodeRecord {
  enum class Kind { kTutorial, kCoplay, kFinal };
  int index = 0;
  Kind kind = Kind::kCoplay;
  std::string co_player;  // empty when played alone
  int n_players = 2;
  int steps = 0;
  int points = 0;  // environment reward credited to the participant
  int coins = 0;   // collected by anyone
  int matching = 0;
  int mismatching = 0;
  int participant_coins = 0;
  friend bool operator==(const EpisodeRecord&, const EpisodeRecord&) = default;
};

std::string EpisodeKindName(EpisodeRecord::Kind kind);

struct SessionInit {
  std::string session_id;
  std::string participant_id;
  StudyConfig config;
  uint64_t seed = 0;
  std::string token;  // reconnection secret; empty for offline sessions
};

nlohmann::json SessionInitToJson(const SessionInit& init);
SessionInit SessionInitFromJson(const nlohmann::json& j);

// Deterministic study state machine for one participant. Every transition is
// a pure function of the init record and the sequence of accepted events, so
// a session can be rebuilt from its log. Rejected events leave it unchanged.
class Session {
 public:
  explicit Session(SessionInit init);

  // Applies one event and returns the outbound messages in order. Throws
  // ProtocolError for events not legal in the current phase (including stale
  // prompt ids) and ValidationError for out-of-range responses.
  std::vector<nlohmann::json> Handle(const ClientEvent& event);

  // Messages that bring a (re)connecting client up to date: the phase, then
  // the open prompt or the latest frame.
  std::vector<nlohmann::json> CurrentView() const;

  const SessionInit& init() const { return init_; }
  const StudyConfig& config() const { return init_.config; }
  Phase phase() const { return phase_; }
  bool live() const { return phase_ == Phase::kTutorial || phase_ == Phase::kEpisode; }
  bool complete() const { return phase_ == Phase::kComplete; }
  const EpisodePlan& plan() const { return plan_; }
  Color participant_color() const { return participant_color_; }
  Color color_of(const std::string& label) const { return agent_colors_.at(label); }
  const std::map<std::string, Color>& agent_colors() const { return agent_colors_; }

  const std::vector<EpisodeRecord>& episodes() const { return episodes_; }
  const std::vector<PerceptionResponse>& perceptions() const { return perceptions_; }
  const std::vector<PreferenceResponse>& preferences() const { return preferences_; }
  const std::optional<PartnerChoice>& choice() const { return choice_; }
  const std::vector<Impression>& impressions() const { return impressions_; }

  // Sum of participant points over co-play episodes (tutorial excluded).
  int64_t coplay_points() const;
  // Throws ProtocolError before the debrief phase.
  int64_t bonus_cents() const;

  // The game of the current or most recent episode (nullptr before the
  // tutorial starts).
  const GameState* game() const { return game_ ? &*game_ : nullptr; }

  // Complete state without wall-clock fields; equal snapshots mean equal
  // sessions.
  nlohmann::json Snapshot() const;

 private:
  struct Live {
    EpisodeRecord record;
    TaskConfig config;
    std::optional<Agent> co_player;
    PolicyMemory memory;
    Rng agent_rng{0};
    std::optional<Action> buffered;
    std::deque<nlohmann::json> ticker;
  };

  using Messages = std::vector<nlohmann::json>;

  void OnInstructionAck(const nlohmann::json& payload, Messages& out);
  void OnKeyInput(const nlohmann::json& payload);
  void OnTick(Messages& out);
  void OnResponse(const nlohmann::json& payload, Messages& out);

  void CheckPromptId(const nlohmann::json& payload) const;
  void EnterPhase(Phase phase, Messages& out);
  void StartEpisode(EpisodeRecord::Kind kind, int index, const std::string& co_player,
                    bool alone, Messages& out);
  void FinishEpisode(Messages& out);
  void Advance(int finished_index, Messages& out);

  nlohmann::json PhaseMessage() const;
  nlohmann::json PromptMessage() const;
  nlohmann::json FrameMessage() const;
  std::vector<std::string> EncounteredColors() const;
  std::string ColorNameOf(const std::string& label) const;
  int TotalCoplayEpisodes() const;

  SessionInit init_;
  EpisodePlan plan_;
  Color participant_color_ = Color::kRed;
  std::map<std::string, Color> agent_colors_;
  Rng order_rng_;

  Phase phase_ = Phase::kInstructions;
  int prompt_id_ = 1;
  std::string instruction_page_ = "instructions";
  int current_episode_ = 0;  // index of the episode being played or rated
  std::vector<std::string> perception_order_;

  std::optional<GameState> game_;
  std::optional<Live> live_;

  std::vector<EpisodeRecord> episodes_;
  std::vector<PerceptionResponse> perceptions_;
  std::vector<PreferenceResponse> preferences_;
  std::optional<PartnerChoice> choice_;
  std::vector<Impression> impressions_;
};

}  // namespace coins

#endif  // COINS_STUDY_SESSION_H_
