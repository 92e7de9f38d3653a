// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCABLAB_ENVS_GRID_DUEL_HPP_
#define SCABLAB_ENVS_GRID_DUEL_HPP_

#include <array>
#include <memory>

#include "scablab/game.hpp"

namespace scablab::envs {

// Two-player trail duel on a square board, best-of-N rounds. Each agent
// leaves an impassable trail on every cell it vacates; moving off the board,
// into a trail, into the opponent, or into the cell the opponent targets the
// same step loses the round. Simultaneous crashes and round-cap timeouts are
// draws. Episodic return is round wins minus round losses.
struct GridDuelConfig {
  int board_size = 7;  // odd, >= 5
  int rounds_per_episode = 5;
  int round_step_cap = 0;  // <= 0 means board_size^2
};

class GridDuel final : public MarkovGame {
 public:
  explicit GridDuel(const GridDuelConfig& config);

  const std::string& name() const override { return name_; }
  GameMode mode() const override { return GameMode::kCompetitive; }
  int num_roles() const override { return 2; }
  const std::vector<std::string>& role_names() const override { return roles_; }
  ActionSpace action_space(int role) const override;
  int step_cap() const override;

  State initial_state(RngStream& rng) const override;
  StepResult step(const State& state, const std::vector<Action>& actions,
                  RngStream& rng) const override;
  Observation observe(const State& state, int role) const override;
  std::vector<double> tracked_coords(const Observation& obs,
                                     int target_role) const override;
  Action action_from_coord_delta(std::span<const double> delta) const override;
  bool window_valid(const Observation& prev,
                    const Observation& cur) const override;
  std::string config_text() const override;

  const GridDuelConfig& config() const { return config_; }

  // Action indices.
  enum : int { kUp = 0, kDown = 1, kLeft = 2, kRight = 3, kNoop = 4 };

 private:
  int cell(int r, int c) const { return r * config_.board_size + c; }
  State fresh_round_state(int round, int wins0, int wins1, int step,
                          RngStream& rng) const;

  GridDuelConfig config_;
  int round_cap_;
  std::string name_ = "grid_duel";
  std::vector<std::string> roles_{"victim", "attacker"};
};

std::unique_ptr<MarkovGame> make_grid_duel(const GridDuelConfig& config = {});

}  // namespace scablab::envs

#endif  // SCABLAB_ENVS_GRID_DUEL_HPP_
