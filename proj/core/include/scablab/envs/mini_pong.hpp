// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCABLAB_ENVS_MINI_PONG_HPP_
#define SCABLAB_ENVS_MINI_PONG_HPP_

#include <memory>

#include "scablab/game.hpp"
#include "scablab/policy.hpp"

namespace scablab::envs {

// Two-paddle pong on a small grid with a deterministic ball; the only
// stochasticity is the serve direction. First to points_to_win ends the
// episode. Rewards are +-1 per point, zero otherwise.
struct MiniPongConfig {
  int width = 9;
  int height = 7;
  int paddle = 2;
  int points_to_win = 5;
  int episode_step_cap = 300;
};

class MiniPong final : public MarkovGame {
 public:
  explicit MiniPong(const MiniPongConfig& config);

  const std::string& name() const override { return name_; }
  GameMode mode() const override { return GameMode::kCompetitive; }
  int num_roles() const override { return 2; }
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

  const MiniPongConfig& config() const { return config_; }

  enum : int { kUp = 0, kDown = 1, kNoop = 2 };

 private:
  void serve(State& s, RngStream& rng) const;

  MiniPongConfig config_;
  std::string name_ = "mini_pong";
  std::vector<std::string> roles_{"victim", "attacker"};
};

std::unique_ptr<MarkovGame> make_mini_pong(const MiniPongConfig& config = {});

// Deterministic defender for pong-family games: simulates the ball forward
// to the column it defends (assuming far-side returns) and repositions for
// the predicted arrival row. Ball round trips are long enough that it never
// concedes a point under the built-in dynamics. Frames must be mirrored so
// that the defended goal sits at x=0 and an approaching ball has vx < 0.
class PaddleTrackerPolicy : public Policy {
 public:
  struct Layout {
    int ball_x_slot;
    int ball_y_slot;
    int vel_x_slot;
    int vel_y_slot;
    int width;
    int height;
    int paddle;
    int own_col;       // mirrored column this paddle defends
    int far_flip_col;  // nearest far-side column assumed to return the ball
    int up;
    int down;
    int noop;
  };

  PaddleTrackerPolicy(const MarkovGame& game, int role, Layout layout);
  Action act(ObsWindow window, RngStream& rng) override;

 private:
  const MarkovGame& game_;
  int role_;
  Layout layout_;
};

std::unique_ptr<Policy> make_mini_pong_tracker(const MarkovGame& game, int role);

}  // namespace scablab::envs

#endif  // SCABLAB_ENVS_MINI_PONG_HPP_
