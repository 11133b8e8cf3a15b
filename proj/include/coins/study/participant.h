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

#ifndef COINS_STUDY_PARTICIPANT_H_
#define COINS_STUDY_PARTICIPANT_H_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "coins/env/rng.h"
#include "coins/study/session.h"
#include "json.hpp"

namespace coins {

// Headless stand-in for a human participant. It reads server messages and
// answers with wire-format client messages: it moves toward coins using the
// frame's grid and rates co-players by how often they took coins of its own
// color, so exported tables carry a real (synthetic) signal.
class ScriptedParticipant {
 public:
  struct Options {
    double key_rate = 0.9;         // chance of sending a key on a frame
    double prosocial_rate = 0.5;   // chance of avoiding the other color
    double empty_impression_rate = 0.2;
    std::string choice_override;   // "play_alone" or "play_with_coplayer"
  };

  explicit ScriptedParticipant(uint64_t seed) : ScriptedParticipant(seed, Options()) {}
  ScriptedParticipant(uint64_t seed, Options options);

  nlohmann::json Hello() const;
  std::vector<nlohmann::json> OnMessage(const nlohmann::json& message);
  // Handles the messages produced by one server event together: a key press
  // triggered by a frame is dropped when the same batch ends the live phase.
  std::vector<nlohmann::json> OnBatch(const std::vector<nlohmann::json>& batch);
  bool finished() const { return finished_; }
  // Bonus announced by the server, in cents (-1 before the end).
  int64_t bonus_cents() const { return bonus_cents_; }

 private:
  nlohmann::json Reply(const nlohmann::json& prompt);
  int Likert(double latent);

  Rng rng_;
  Options options_;
  std::string self_color_;
  std::string current_co_player_;
  std::map<std::string, double> warmth_;
  std::map<std::string, int> taken_;      // own-color coins taken, per episode
  std::map<std::string, int> collected_;  // coins collected by the co-player
  int last_ticker_step_ = -1;
  bool finished_ = false;
  int64_t bonus_cents_ = -1;
};

// Plays a whole session in-process: the participant's replies go through
// ParseClientMessage and Session::Handle, and ticks are injected whenever
// the session is live and idle. `on_event` sees every accepted event (for
// logging). Returns the number of ticks.
int64_t SimulateSession(
    Session& session, ScriptedParticipant& participant,
    const std::function<void(const ClientEvent&)>& on_event = {});

// Plays `sessions` synthetic participants through complete sessions and
// writes one log per session into `log_dir` (ids sim-<seed>-<i>). Returns
// the session ids. Throws ConfigError if a log already exists.
std::vector<std::string> SimulateStudy(const StudyConfig& config, int sessions, uint64_t seed,
                                       const std::string& log_dir);

}  // namespace coins

#endif  // COINS_STUDY_PARTICIPANT_H_
