// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#include "scablab/envs/registry.hpp"

#include <json.hpp>

#include <stdexcept>

#include "scablab/envs/grid_duel.hpp"
#include "scablab/envs/mini_pong.hpp"
#include "scablab/envs/push_point.hpp"
#include "scablab/envs/team_pong.hpp"
#include "scablab/policy.hpp"

namespace scablab::envs {

namespace {

using nlohmann::json;

void check_fields(const json& j, const std::vector<std::string>& known,
                  const std::string& game) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const auto& k : known) ok = ok || k == key;
    if (!ok) {
      throw std::invalid_argument(game + ": unknown config field \"" + key +
                                  "\"");
    }
  }
}

}  // namespace

std::vector<std::string> registered_games() {
  return {"grid_duel", "mini_pong", "push_point", "team_pong"};
}

std::unique_ptr<MarkovGame> create_game(const std::string& key,
                                        const std::string& config_json) {
  json j = json::parse(config_json);
  if (!j.is_object()) {
    throw std::invalid_argument("create_game: config must be a JSON object");
  }
  if (key == "grid_duel") {
    check_fields(j, {"board_size", "rounds_per_episode", "round_step_cap"}, key);
    GridDuelConfig c;
    c.board_size = j.value("board_size", c.board_size);
    c.rounds_per_episode = j.value("rounds_per_episode", c.rounds_per_episode);
    c.round_step_cap = j.value("round_step_cap", c.round_step_cap);
    return make_grid_duel(c);
  }
  if (key == "mini_pong") {
    check_fields(j, {"width", "height", "paddle", "points_to_win",
                     "episode_step_cap"},
                 key);
    MiniPongConfig c;
    c.width = j.value("width", c.width);
    c.height = j.value("height", c.height);
    c.paddle = j.value("paddle", c.paddle);
    c.points_to_win = j.value("points_to_win", c.points_to_win);
    c.episode_step_cap = j.value("episode_step_cap", c.episode_step_cap);
    return make_mini_pong(c);
  }
  if (key == "team_pong") {
    check_fields(j, {"width", "height", "paddle", "points_to_win",
                     "episode_step_cap", "mode"},
                 key);
    TeamPongConfig c;
    c.width = j.value("width", c.width);
    c.height = j.value("height", c.height);
    c.paddle = j.value("paddle", c.paddle);
    c.points_to_win = j.value("points_to_win", c.points_to_win);
    c.episode_step_cap = j.value("episode_step_cap", c.episode_step_cap);
    const std::string mode = j.value("mode", "competitive");
    if (mode == "competitive") {
      c.mode = GameMode::kCompetitive;
    } else if (mode == "cooperative_pair") {
      c.mode = GameMode::kCooperativePair;
    } else {
      throw std::invalid_argument(
          "team_pong: mode must be competitive or cooperative_pair");
    }
    return make_team_pong(c);
  }
  if (key == "push_point") {
    check_fields(j, {"move_scale", "contact_radius", "episode_step_cap"}, key);
    PushPointConfig c;
    c.move_scale = j.value("move_scale", c.move_scale);
    c.contact_radius = j.value("contact_radius", c.contact_radius);
    c.episode_step_cap = j.value("episode_step_cap", c.episode_step_cap);
    return make_push_point(c);
  }
  std::string known;
  for (const auto& k : registered_games()) known += " " + k;
  throw std::invalid_argument("create_game: unknown game \"" + key +
                              "\"; known games:" + known);
}

namespace {

class RandomPolicy : public Policy {
 public:
  explicit RandomPolicy(ActionSpace space) : space_(std::move(space)) {}

  Action act(ObsWindow, RngStream& rng) override {
    if (space_.kind == ActionSpace::Kind::kDiscrete) {
      return Action::of(static_cast<int>(
          rng.next_below(static_cast<std::uint64_t>(space_.size()))));
    }
    std::vector<double> box(static_cast<std::size_t>(space_.dim));
    for (auto& v : box) v = rng.uniform(space_.low, space_.high);
    return Action::of(std::move(box));
  }

 private:
  ActionSpace space_;
};

}  // namespace

std::unique_ptr<Policy> make_random_policy(ActionSpace space) {
  return std::make_unique<RandomPolicy>(std::move(space));
}

ScriptPolicy::ScriptPolicy(std::vector<Action> script, Policy* fallback,
                           Action fallback_action)
    : script_(std::move(script)),
      fallback_(fallback),
      fallback_action_(std::move(fallback_action)) {}

Action ScriptPolicy::act(ObsWindow window, RngStream& rng) {
  if (cursor_ < script_.size()) return script_[cursor_++];
  if (fallback_ != nullptr) return fallback_->act(window, rng);
  return fallback_action_;
}

}  // namespace scablab::envs
