// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCABLAB_ENVS_PUSH_POINT_HPP_
#define SCABLAB_ENVS_PUSH_POINT_HPP_

#include <memory>

#include "scablab/game.hpp"

namespace scablab::envs {

// Continuous pursuit on the unit square: a defender is rewarded for staying
// near a fixed landmark, the adversary for keeping it away. Agents move by
// action * move_scale per step; when they come closer than contact_radius
// the defender is shoved out along the separation line. Episodes are fixed
// length (step cap only).
struct PushPointConfig {
  double move_scale = 0.1;
  double contact_radius = 0.12;
  int episode_step_cap = 60;
};

class PushPoint final : public MarkovGame {
 public:
  explicit PushPoint(const PushPointConfig& config);

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
  // Continuous effective action: coordinate delta divided by move_scale.
  Action action_from_coord_delta(std::span<const double> delta) const override;
  std::string config_text() const override;

  const PushPointConfig& config() const { return config_; }

 private:
  PushPointConfig config_;
  std::string name_ = "push_point";
  std::vector<std::string> roles_{"victim", "attacker"};
};

std::unique_ptr<MarkovGame> make_push_point(const PushPointConfig& config = {});

}  // namespace scablab::envs

#endif  // SCABLAB_ENVS_PUSH_POINT_HPP_
