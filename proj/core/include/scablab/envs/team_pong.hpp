// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCABLAB_ENVS_TEAM_PONG_HPP_
#define SCABLAB_ENVS_TEAM_PONG_HPP_

#include <memory>

#include "scablab/game.hpp"
#include "scablab/policy.hpp"

namespace scablab::envs {

// Four-player pong: each side fields a back paddle (outer column) and a
// front paddle (one column in). Team members share rewards. The mode tag
// distinguishes the competitive setting from the cooperative-pair one (the
// attack pair shares a team); dynamics are identical.
struct TeamPongConfig {
  int width = 11;
  int height = 7;
  int paddle = 2;
  int points_to_win = 5;
  int episode_step_cap = 400;
  GameMode mode = GameMode::kCompetitive;
};

class TeamPong final : public MarkovGame {
 public:
  explicit TeamPong(const TeamPongConfig& config);

  const std::string& name() const override { return name_; }
  GameMode mode() const override { return config_.mode; }
  int num_roles() const override { return 4; }
  const std::vector<std::string>& role_names() const override { return roles_; }
  ActionSpace action_space(int role) const override;
  int step_cap() const override { return config_.episode_step_cap; }

  State initial_state(RngStream& rng) const override;
  StepResult step(const State& state, const std::vector<Action>& actions,
                  RngStream& rng) const override;
  Observation observe(const State& state, int role) const override;
  std::vector<double> tracked_coords(const Observation& obs,
                                     int target_role) const override;
  Action action_from_coord_delta(std::span<const double> delta) const override;
  std::string config_text() const override;

  const TeamPongConfig& config() const { return config_; }

  enum : int { kUp = 0, kDown = 1, kNoop = 2 };
  static int team_of(int role) { return role < 2 ? 0 : 1; }

 private:
  void serve(State& s, RngStream& rng) const;

  TeamPongConfig config_;
  std::string name_ = "team_pong";
  std::vector<std::string> roles_{"left_back", "left_front", "right_back",
                                  "right_front"};
};

std::unique_ptr<MarkovGame> make_team_pong(const TeamPongConfig& config = {});
std::unique_ptr<Policy> make_team_pong_tracker(const MarkovGame& game, int role);

}  // namespace scablab::envs

#endif  // SCABLAB_ENVS_TEAM_PONG_HPP_
