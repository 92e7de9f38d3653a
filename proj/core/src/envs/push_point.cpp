// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#include "scablab/envs/push_point.hpp"

#include <json.hpp>

#include <cmath>
#include <stdexcept>

namespace scablab::envs {

namespace {
enum : int {
  kStep = 0,
  kDefX = 1,
  kDefY = 2,
  kAttX = 3,
  kAttY = 4,
  kLmX = 5,
  kLmY = 6,
};

double clip01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }
}  // namespace

PushPoint::PushPoint(const PushPointConfig& config) : config_(config) {
  if (config_.move_scale <= 0.0 || config_.contact_radius < 0.0) {
    throw std::invalid_argument("push_point: bad config");
  }
}

ActionSpace PushPoint::action_space(int role) const {
  if (role < 0 || role >= 2) throw std::invalid_argument("push_point: bad role");
  return ActionSpace::continuous(2, -1.0, 1.0);
}

State PushPoint::initial_state(RngStream& rng) const {
  State s(7, 0.0);
  s[kDefX] = rng.next_double();
  s[kDefY] = rng.next_double();
  s[kAttX] = rng.next_double();
  s[kAttY] = rng.next_double();
  s[kLmX] = 0.5;
  s[kLmY] = 0.5;
  return s;
}

StepResult PushPoint::step(const State& state,
                           const std::vector<Action>& actions,
                           RngStream&) const {
  if (actions.size() != 2) throw std::invalid_argument("push_point: need 2 actions");
  for (int i = 0; i < 2; ++i) {
    if (!action_space(i).contains(actions[static_cast<std::size_t>(i)])) {
      throw std::invalid_argument("push_point: action outside space");
    }
  }
  State next = state;
  next[kStep] = state[kStep] + 1;
  next[kDefX] = clip01(state[kDefX] + actions[0].box[0] * config_.move_scale);
  next[kDefY] = clip01(state[kDefY] + actions[0].box[1] * config_.move_scale);
  next[kAttX] = clip01(state[kAttX] + actions[1].box[0] * config_.move_scale);
  next[kAttY] = clip01(state[kAttY] + actions[1].box[1] * config_.move_scale);

  const double dx = next[kDefX] - next[kAttX];
  const double dy = next[kDefY] - next[kAttY];
  const double dist = std::sqrt(dx * dx + dy * dy);
  if (dist < config_.contact_radius) {
    // Shove the defender out to the contact radius; coincident positions
    // resolve along +x so the outcome stays deterministic.
    double ux = 1.0;
    double uy = 0.0;
    if (dist > 1e-12) {
      ux = dx / dist;
      uy = dy / dist;
    }
    next[kDefX] = clip01(next[kAttX] + ux * config_.contact_radius);
    next[kDefY] = clip01(next[kAttY] + uy * config_.contact_radius);
  }

  const double lx = next[kDefX] - next[kLmX];
  const double ly = next[kDefY] - next[kLmY];
  const double lm_dist = std::sqrt(lx * lx + ly * ly);

  StepResult res;
  res.next = std::move(next);
  res.rewards = {-lm_dist, lm_dist};
  res.done = false;  // fixed-length episodes, the step cap truncates
  return res;
}

Observation PushPoint::observe(const State& state, int role) const {
  if (role < 0 || role >= 2) throw std::invalid_argument("push_point: bad role");
  Observation obs;
  obs.role = role;
  obs.step = static_cast<int>(state[kStep]);
  const bool def = role == 0;
  obs.frame = {
      def ? state[kDefX] : state[kAttX],
      def ? state[kDefY] : state[kAttY],
      def ? state[kAttX] : state[kDefX],
      def ? state[kAttY] : state[kDefY],
      state[kLmX],
      state[kLmY],
  };
  return obs;
}

std::vector<double> PushPoint::tracked_coords(const Observation& obs,
                                              int target_role) const {
  if (target_role == obs.role) return {obs.frame[0], obs.frame[1]};
  return {obs.frame[2], obs.frame[3]};
}

Action PushPoint::action_from_coord_delta(std::span<const double> delta) const {
  if (delta.size() != 2) {
    throw std::invalid_argument("push_point: delta must be (dx, dy)");
  }
  return Action::of(
      {delta[0] / config_.move_scale, delta[1] / config_.move_scale});
}

std::string PushPoint::config_text() const {
  nlohmann::json j;
  j["name"] = name_;
  j["move_scale"] = config_.move_scale;
  j["contact_radius"] = config_.contact_radius;
  j["episode_step_cap"] = config_.episode_step_cap;
  return j.dump();
}

std::unique_ptr<MarkovGame> make_push_point(const PushPointConfig& config) {
  return std::make_unique<PushPoint>(config);
}

}  // namespace scablab::envs
