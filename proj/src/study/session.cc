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

#include "coins/study/session.h"

#include <algorithm>
#include <set>
#include <utility>

#include "coins/env/observation.h"
#include "coins/errors.h"
#include "coins/study/bonus.h"

namespace coins {
namespace {

using nlohmann::json;

constexpr uint64_t kColorStream = 1;
constexpr uint64_t kPlanStream = 2;
constexpr uint64_t kOrderStream = 3;
constexpr uint64_t kEpisodeStreamBase = 100;

json Message(std::string_view type) {
  return json{{"type", type}, {"v", kProtocolVersion}};
}

std::string Str(Color c) { return std::string(ColorName(c)); }

int RequireLikert(const json& value, const std::string& what) {
  if (!value.is_number_integer()) throw ValidationError(what + " must be an integer");
  const int v = value.get<int>();
  if (v < kLikertMin || v > kLikertMax) {
    throw ValidationError(what + " must be in [1, 5], got " + std::to_string(v));
  }
  return v;
}

}  // namespace

std::string PhaseName(Phase phase) {
  switch (phase) {
    case Phase::kInstructions: return "instructions";
    case Phase::kTutorial: return "tutorial";
    case Phase::kRules: return "rules";
    case Phase::kEpisodeIntro: return "episode_intro";
    case Phase::kEpisode: return "episode";
    case Phase::kPerception: return "perception";
    case Phase::kPreference: return "preference";
    case Phase::kPartnerChoice: return "partner_choice";
    case Phase::kDebrief: return "debrief";
    case Phase::kComplete: return "complete";
  }
  return "unknown";
}

std::string EpisodeKindName(EpisodeRecord::Kind kind) {
  switch (kind) {
    case EpisodeRecord::Kind::kTutorial: return "tutorial";
    case EpisodeRecord::Kind::kCoplay: return "coplay";
    case EpisodeRecord::Kind::kFinal: return "final";
  }
  return "unknown";
}

ClientEvent ParseClientMessage(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ProtocolError(std::string("malformed message: ") + e.what());
  }
  if (!j.is_object()) throw ProtocolError("message must be a JSON object");
  const auto type = j.find("type");
  if (type == j.end() || !type->is_string()) throw ProtocolError("message without type");
  const auto v = j.find("v");
  if (v == j.end() || !v->is_number_integer() || v->get<int>() != kProtocolVersion) {
    throw ProtocolError("unsupported protocol version");
  }
  ClientEvent e{type->get<std::string>(), j};
  static const std::set<std::string> kInbound = {"hello", "instruction_ack", "key_input",
                                                 "response"};
  if (!kInbound.contains(e.type)) throw ProtocolError("unknown message type '" + e.type + "'");
  e.payload.erase("type");
  e.payload.erase("v");
  return e;
}

json SessionInitToJson(const SessionInit& init) {
  return {{"session_id", init.session_id},
          {"participant_id", init.participant_id},
          {"study", init.config},
          {"seed", init.seed},
          {"token", init.token}};
}

SessionInit SessionInitFromJson(const json& j) {
  try {
    SessionInit init;
    init.session_id = j.at("session_id").get<std::string>();
    init.participant_id = j.at("participant_id").get<std::string>();
    init.config = j.at("study").get<StudyConfig>();
    init.seed = j.at("seed").get<uint64_t>();
    init.token = j.value("token", std::string());
    return init;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("session_start record: ") + e.what());
  }
}

Session::Session(SessionInit init)
    : init_(std::move(init)), order_rng_(DeriveSeed(init_.seed, kOrderStream)) {
  init_.config.Validate();
  std::vector<Color> colors(kAllColors.begin(), kAllColors.end());
  Rng color_rng(DeriveSeed(init_.seed, kColorStream));
  for (size_t i = colors.size(); i > 1; --i) {
    std::swap(colors[i - 1], colors[color_rng.UniformInt(static_cast<int>(i))]);
  }
  participant_color_ = colors[0];
  std::vector<std::string> labels;
  for (const auto& [label, spec] : init_.config.roster) {
    agent_colors_[label] = colors[1 + labels.size()];
    labels.push_back(label);
  }
  Rng plan_rng(DeriveSeed(init_.seed, kPlanStream));
  plan_ = BuildCoplayerSequence(init_.config.variant, labels, plan_rng);
}

int Session::TotalCoplayEpisodes() const {
  return static_cast<int>(plan_.coplayers.size()) + (plan_.choice_slot ? 1 : 0);
}

std::string Session::ColorNameOf(const std::string& label) const {
  return Str(agent_colors_.at(label));
}

std::vector<std::string> Session::EncounteredColors() const {
  std::vector<std::string> out;
  for (const EpisodeRecord& e : episodes_) {
    if (e.co_player.empty()) continue;
    const std::string c = ColorNameOf(e.co_player);
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  }
  return out;
}

std::vector<json> Session::Handle(const ClientEvent& event) {
  Messages out;
  if (event.type == "hello") {
    return CurrentView();
  } else if (event.type == "instruction_ack") {
    OnInstructionAck(event.payload, out);
  } else if (event.type == "key_input") {
    OnKeyInput(event.payload);
  } else if (event.type == "tick") {
    OnTick(out);
  } else if (event.type == "response") {
    OnResponse(event.payload, out);
  } else {
    throw ProtocolError("unknown event type '" + event.type + "'");
  }
  return out;
}

void Session::CheckPromptId(const json& payload) const {
  const auto it = payload.find("prompt_id");
  if (it == payload.end() || !it->is_number_integer() || it->get<int>() != prompt_id_) {
    throw ProtocolError("response does not answer the open prompt " +
                        std::to_string(prompt_id_));
  }
}

void Session::OnInstructionAck(const json& payload, Messages& out) {
  if (phase_ != Phase::kInstructions && phase_ != Phase::kRules &&
      phase_ != Phase::kEpisodeIntro) {
    throw ProtocolError("instruction_ack not expected in phase " + PhaseName(phase_));
  }
  CheckPromptId(payload);
  switch (phase_) {
    case Phase::kInstructions: {
      // The tutorial's second coin color is the first planned co-player's.
      StartEpisode(EpisodeRecord::Kind::kTutorial, 0, plan_.coplayers.front(), true, out);
      break;
    }
    case Phase::kRules:
      current_episode_ = 1;
      instruction_page_ = "episode_intro";
      EnterPhase(Phase::kEpisodeIntro, out);
      break;
    case Phase::kEpisodeIntro: {
      const int k = current_episode_;
      if (k <= static_cast<int>(plan_.coplayers.size())) {
        StartEpisode(EpisodeRecord::Kind::kCoplay, k, plan_.coplayers[k - 1], false, out);
      } else {
        StartEpisode(EpisodeRecord::Kind::kFinal, k, choice_->co_player, choice_->play_alone,
                     out);
      }
      break;
    }
    default:
      break;
  }
}

void Session::OnKeyInput(const json& payload) {
  if (!live()) throw ProtocolError("key_input not expected in phase " + PhaseName(phase_));
  const auto it = payload.find("action");
  if (it == payload.end() || !it->is_string()) throw ValidationError("key_input needs an action");
  const auto action = ParseAction(it->get<std::string>());
  if (!action) throw ValidationError("unknown action '" + it->get<std::string>() + "'");
  live_->buffered = *action;
}

void Session::StartEpisode(EpisodeRecord::Kind kind, int index, const std::string& co_player,
                           bool alone, Messages& out) {
  Live live;
  live.record.index = index;
  live.record.kind = kind;
  live.config = kind == EpisodeRecord::Kind::kTutorial ? init_.config.tutorial
                                                       : init_.config.coplay;
  live.config.n_players = alone ? 1 : 2;
  live.record.n_players = live.config.n_players;
  if (!alone) {
    live.record.co_player = co_player;
    live.co_player = Agent::FromSpec(init_.config.roster.at(co_player));
  }
  const uint64_t episode_seed = DeriveSeed(init_.seed, kEpisodeStreamBase + index);
  game_ = GenerateRoom(live.config, DeriveSeed(episode_seed, 0),
                       std::make_pair(participant_color_, agent_colors_.at(co_player)));
  live.agent_rng = Rng(DeriveSeed(episode_seed, 1));
  live_ = std::move(live);
  current_episode_ = index;
  EnterPhase(kind == EpisodeRecord::Kind::kTutorial ? Phase::kTutorial : Phase::kEpisode, out);
}

void Session::OnTick(Messages& out) {
  if (!live()) throw ProtocolError("tick outside a live episode");
  Live& live = *live_;
  GameState& state = *game_;
  std::vector<Action> joint = {live.buffered.value_or(Action::kNoOp)};
  live.buffered.reset();
  if (live.co_player) {
    const Policy& policy = *live.co_player->policy;
    joint.push_back(live.co_player->Act(Observe(state, 1, policy.frame(), policy.radius()),
                                        live.memory, live.agent_rng));
  }
  const StepOutcome outcome = Step(state, joint, live.config);
  EpisodeRecord& rec = live.record;
  rec.steps = state.step_index();
  rec.points += outcome.rewards[0];
  for (const CollectionEvent& e : outcome.events) {
    ++rec.coins;
    (e.matching ? rec.matching : rec.mismatching)++;
    if (e.collector == 0) ++rec.participant_coins;
    live.ticker.push_back({{"step", state.step_index()},
                           {"collector", e.collector == 0 ? "self" : "co_player"},
                           {"collector_color", Str(state.players()[e.collector].color)},
                           {"coin", Str(e.coin)}});
    if (live.ticker.size() > kTickerLength) live.ticker.pop_front();
  }
  out.push_back(FrameMessage());
  const bool tutorial_done = rec.kind == EpisodeRecord::Kind::kTutorial &&
                             rec.participant_coins >= init_.config.tutorial_coin_target;
  if (state.terminal() || tutorial_done) FinishEpisode(out);
}

void Session::FinishEpisode(Messages& out) {
  const EpisodeRecord rec = live_->record;
  episodes_.push_back(rec);
  live_.reset();
  switch (rec.kind) {
    case EpisodeRecord::Kind::kTutorial:
      instruction_page_ = "rules";
      EnterPhase(Phase::kRules, out);
      break;
    case EpisodeRecord::Kind::kCoplay:
      perception_order_.assign(kPerceptionItems.begin(), kPerceptionItems.end());
      for (size_t i = perception_order_.size(); i > 1; --i) {
        std::swap(perception_order_[i - 1],
                  perception_order_[order_rng_.UniformInt(static_cast<int>(i))]);
      }
      EnterPhase(Phase::kPerception, out);
      break;
    case EpisodeRecord::Kind::kFinal:
      EnterPhase(Phase::kDebrief, out);
      break;
  }
}

void Session::Advance(int finished_index, Messages& out) {
  if (finished_index < static_cast<int>(plan_.coplayers.size())) {
    current_episode_ = finished_index + 1;
    instruction_page_ = "episode_intro";
    EnterPhase(Phase::kEpisodeIntro, out);
  } else if (plan_.choice_slot && !choice_) {
    EnterPhase(Phase::kPartnerChoice, out);
  } else {
    EnterPhase(Phase::kDebrief, out);
  }
}

void Session::OnResponse(const json& payload, Messages& out) {
  static const std::map<Phase, std::string> kKinds = {{Phase::kPerception, "perception"},
                                                      {Phase::kPreference, "preference"},
                                                      {Phase::kPartnerChoice, "partner_choice"},
                                                      {Phase::kDebrief, "free_text"}};
  const auto kind = kKinds.find(phase_);
  if (kind == kKinds.end()) {
    throw ProtocolError("response not expected in phase " + PhaseName(phase_));
  }
  CheckPromptId(payload);
  if (payload.value("kind", std::string()) != kind->second) {
    throw ProtocolError("expected a " + kind->second + " response");
  }
  switch (phase_) {
    case Phase::kPerception: {
      const auto items = payload.find("items");
      if (items == payload.end() || !items->is_object()) {
        throw ValidationError("perception response needs an items object");
      }
      PerceptionResponse r;
      for (std::string_view name : kPerceptionItems) {
        const auto v = items->find(std::string(name));
        if (v == items->end()) throw ValidationError("missing item '" + std::string(name) + "'");
        r.items[std::string(name)] = RequireLikert(*v, std::string(name));
      }
      if (items->size() != kPerceptionItems.size()) {
        throw ValidationError("unexpected perception item");
      }
      r.episode = current_episode_;
      r.co_player = episodes_.back().co_player;
      r.order = perception_order_;
      perceptions_.push_back(std::move(r));
      const auto& after = plan_.preference_after;
      if (std::find(after.begin(), after.end(), current_episode_) != after.end()) {
        EnterPhase(Phase::kPreference, out);
      } else {
        Advance(current_episode_, out);
      }
      break;
    }
    case Phase::kPreference: {
      const int value = RequireLikert(payload.value("value", json()), "preference value");
      PreferenceResponse r;
      r.index = static_cast<int>(preferences_.size()) + 1;
      r.first_episode = current_episode_ - 1;
      r.second_episode = current_episode_;
      r.first = plan_.coplayers[r.first_episode - 1];
      r.second = plan_.coplayers[r.second_episode - 1];
      r.value = value;
      preferences_.push_back(std::move(r));
      Advance(current_episode_, out);
      break;
    }
    case Phase::kPartnerChoice: {
      const std::string choice = payload.value("choice", std::string());
      if (choice != "play_alone" && choice != "play_with_coplayer") {
        throw ValidationError("choice must be play_alone or play_with_coplayer");
      }
      choice_ = PartnerChoice{plan_.coplayers.back(), choice == "play_alone"};
      current_episode_ = static_cast<int>(plan_.coplayers.size()) + 1;
      instruction_page_ = "episode_intro";
      EnterPhase(Phase::kEpisodeIntro, out);
      break;
    }
    case Phase::kDebrief: {
      const auto answers = payload.find("answers");
      if (answers == payload.end() || !answers->is_object()) {
        throw ValidationError("free_text response needs an answers object");
      }
      const std::vector<std::string> colors = EncounteredColors();
      if (answers->size() != colors.size()) {
        throw ValidationError("one answer per encountered co-player expected");
      }
      std::vector<Impression> collected;
      for (const std::string& c : colors) {
        const auto a = answers->find(c);
        if (a == answers->end() || !a->is_string()) {
          throw ValidationError("missing impression for the " + c + " co-player");
        }
        if (a->get_ref<const std::string&>().size() > kMaxFreeTextLength) {
          throw ValidationError("impression too long");
        }
        for (const auto& [label, color] : agent_colors_) {
          if (Str(color) == c) collected.push_back({label, a->get<std::string>()});
        }
      }
      impressions_ = std::move(collected);
      EnterPhase(Phase::kComplete, out);
      json bonus = Message("bonus");
      bonus["cents"] = bonus_cents();
      bonus["amount"] = FormatDollars(bonus_cents());
      bonus["currency"] = "USD";
      out.push_back(std::move(bonus));
      break;
    }
    default:
      break;
  }
}

void Session::EnterPhase(Phase phase, Messages& out) {
  phase_ = phase;
  ++prompt_id_;
  out.push_back(PhaseMessage());
  if (live()) {
    out.push_back(FrameMessage());
  } else if (phase_ != Phase::kComplete) {
    out.push_back(PromptMessage());
  }
}

std::vector<json> Session::CurrentView() const {
  Messages out = {PhaseMessage()};
  if (live()) {
    out.push_back(FrameMessage());
  } else if (phase_ == Phase::kComplete) {
    json bonus = Message("bonus");
    bonus["cents"] = bonus_cents();
    bonus["amount"] = FormatDollars(bonus_cents());
    bonus["currency"] = "USD";
    out.push_back(std::move(bonus));
  } else {
    out.push_back(PromptMessage());
  }
  return out;
}

json Session::PhaseMessage() const {
  json m = Message("phase");
  m["name"] = PhaseName(phase_);
  return m;
}

json Session::PromptMessage() const {
  json m = Message("prompt");
  m["prompt_id"] = prompt_id_;
  const json scale = {{"min", kLikertMin}, {"max", kLikertMax}};
  switch (phase_) {
    case Phase::kInstructions:
    case Phase::kRules:
    case Phase::kEpisodeIntro: {
      m["kind"] = "instructions";
      m["page"] = instruction_page_;
      if (phase_ == Phase::kInstructions) {
        m["self_color"] = Str(participant_color_);
      } else if (phase_ == Phase::kRules) {
        const RewardScheme& s = init_.config.coplay.scheme;
        m["bonus_per_point"] = FormatDollars(std::llround(init_.config.bonus_per_point * 100));
        m["rewards"] = {
            {"matching", {{"self", s.matching.self}, {"other", s.matching.other}}},
            {"mismatching", {{"self", s.mismatching.self}, {"other", s.mismatching.other}}}};
        m["episodes"] = TotalCoplayEpisodes();
      } else {
        m["episode"] = current_episode_;
        const bool final_episode = current_episode_ > static_cast<int>(plan_.coplayers.size());
        if (final_episode && choice_ && choice_->play_alone) {
          m["co_player"] = nullptr;
        } else {
          const std::string& label = final_episode ? choice_->co_player
                                                   : plan_.coplayers[current_episode_ - 1];
          m["co_player"] = ColorNameOf(label);
        }
      }
      break;
    }
    case Phase::kPerception:
      m["kind"] = "perception";
      m["episode"] = current_episode_;
      m["co_player"] = ColorNameOf(episodes_.back().co_player);
      m["items"] = perception_order_;
      m["scale"] = scale;
      break;
    case Phase::kPreference:
      m["kind"] = "preference";
      m["episodes"] = {current_episode_ - 1, current_episode_};
      m["pair"] = {ColorNameOf(plan_.coplayers[current_episode_ - 2]),
                   ColorNameOf(plan_.coplayers[current_episode_ - 1])};
      m["scale"] = scale;
      break;
    case Phase::kPartnerChoice:
      m["kind"] = "partner_choice";
      m["co_player"] = ColorNameOf(plan_.coplayers.back());
      m["options"] = {"play_alone", "play_with_coplayer"};
      break;
    case Phase::kDebrief:
      m["kind"] = "free_text";
      m["items"] = EncounteredColors();
      break;
    default:
      break;
  }
  return m;
}

json Session::FrameMessage() const {
  const GameState& state = *game_;
  const Observation obs = Observe(state, 0, Frame::kAllocentric);
  json grid = json::array();
  for (int r = 0; r < obs.rows; ++r) {
    std::string row;
    for (int c = 0; c < obs.cols; ++c) row.push_back(CodeChar(obs.at(r, c)));
    grid.push_back(std::move(row));
  }
  json m = Message("frame");
  m["step"] = state.step_index();
  m["horizon"] = state.horizon();
  m["grid"] = std::move(grid);
  m["colors"] = {{"self", Str(obs.self_color)}, {"other", Str(obs.other_color)}};
  json ticker = json::array();
  if (live_) {
    for (const json& e : live_->ticker) ticker.push_back(e);
  }
  m["ticker"] = std::move(ticker);
  return m;
}

int64_t Session::coplay_points() const {
  int64_t total = 0;
  for (const EpisodeRecord& e : episodes_) {
    if (e.kind != EpisodeRecord::Kind::kTutorial) total += e.points;
  }
  return total;
}

int64_t Session::bonus_cents() const {
  if (phase_ != Phase::kDebrief && phase_ != Phase::kComplete) {
    throw ProtocolError("the bonus is settled at the debrief");
  }
  return BonusCents(coplay_points(), init_.config.bonus_per_point);
}

json Session::Snapshot() const {
  json j;
  j["init"] = SessionInitToJson(init_);
  j["phase"] = PhaseName(phase_);
  j["prompt_id"] = prompt_id_;
  j["current_episode"] = current_episode_;
  j["participant_color"] = Str(participant_color_);
  json colors = json::object();
  for (const auto& [label, c] : agent_colors_) colors[label] = Str(c);
  j["agent_colors"] = colors;
  j["plan"] = {{"coplayers", plan_.coplayers},
               {"preference_after", plan_.preference_after},
               {"choice_slot", plan_.choice_slot}};
  j["perception_order"] = perception_order_;
  j["order_rng_draws"] = order_rng_.draws();
  json episodes = json::array();
  for (const EpisodeRecord& e : episodes_) {
    episodes.push_back({{"index", e.index}, {"kind", EpisodeKindName(e.kind)},
                        {"co_player", e.co_player}, {"n_players", e.n_players},
                        {"steps", e.steps}, {"points", e.points}, {"coins", e.coins},
                        {"matching", e.matching}, {"mismatching", e.mismatching},
                        {"participant_coins", e.participant_coins}});
  }
  j["episodes"] = episodes;
  json perceptions = json::array();
  for (const PerceptionResponse& p : perceptions_) {
    perceptions.push_back({{"episode", p.episode}, {"co_player", p.co_player},
                           {"order", p.order}, {"items", p.items}});
  }
  j["perceptions"] = perceptions;
  json preferences = json::array();
  for (const PreferenceResponse& p : preferences_) {
    preferences.push_back({{"index", p.index}, {"first", p.first}, {"second", p.second},
                           {"first_episode", p.first_episode},
                           {"second_episode", p.second_episode}, {"value", p.value}});
  }
  j["preferences"] = preferences;
  j["choice"] = choice_ ? json{{"co_player", choice_->co_player},
                               {"play_alone", choice_->play_alone}}
                        : json();
  json impressions = json::array();
  for (const Impression& i : impressions_) {
    impressions.push_back({{"co_player", i.co_player}, {"text", i.text}});
  }
  j["impressions"] = impressions;
  if (game_) {
    const GameState& s = *game_;
    json grid = json::array();
    for (int r = 0; r < s.rows(); ++r) {
      std::string row;
      for (int c = 0; c < s.cols(); ++c) {
        const Cell& cell = s.at({r, c});
        row.push_back(cell.is_wall() ? '#' : cell.has_coin() ? ColorName(cell.coin)[0] : '.');
      }
      grid.push_back(row);
    }
    json players = json::array();
    for (const PlayerState& p : s.players()) {
      players.push_back({{"color", Str(p.color)}, {"row", p.pos.row}, {"col", p.pos.col}});
    }
    j["game"] = {{"grid", grid}, {"players", players}, {"step", s.step_index()},
                 {"score", s.cumulative_score()}, {"rng_draws", s.rng_draws()}};
  }
  if (live_) {
    j["live"] = {{"record_points", live_->record.points},
                 {"buffered", live_->buffered ? json(std::string(ActionName(*live_->buffered)))
                                              : json()},
                 {"ticker", json(std::vector<json>(live_->ticker.begin(), live_->ticker.end()))},
                 {"agent_rng_draws", live_->agent_rng.draws()}};
  }
  return j;
}

}  // namespace coins
