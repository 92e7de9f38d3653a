// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#include "scablab/envs/team_pong.hpp"

#include <json.hpp>

#include <stdexcept>

#include "scablab/envs/mini_pong.hpp"

namespace scablab::envs {

namespace {
enum : int {
  kStep = 0,
  kY0 = 1,  // left back, column 0
  kY1 = 2,  // left front, column 1
  kY2 = 3,  // right back, last column
  kY3 = 4,  // right front, one column in
  kBallX = 5,
  kBallY = 6,
  kVelX = 7,
  kVelY = 8,
  kScoreL = 9,
  kScoreR = 10,
};
}  // namespace

TeamPong::TeamPong(const TeamPongConfig& config) : config_(config) {
  if (config_.width < 7 || config_.height < 3) {
    throw std::invalid_argument("team_pong: court too small");
  }
  if (config_.paddle < 1 || config_.paddle >= config_.height) {
    throw std::invalid_argument("team_pong: bad paddle size");
  }
}

ActionSpace TeamPong::action_space(int role) const {
  if (role < 0 || role >= 4) throw std::invalid_argument("team_pong: bad role");
  return ActionSpace::discrete({"up", "down", "noop"});
}

void TeamPong::serve(State& s, RngStream& rng) const {
  s[kBallX] = config_.width / 2;
  s[kBallY] = config_.height / 2;
  // Diagonal serves only, matching mini_pong.
  const int pick = static_cast<int>(rng.next_below(4));
  s[kVelX] = pick < 2 ? -1 : 1;
  s[kVelY] = (pick % 2) * 2 - 1;
}

State TeamPong::initial_state(RngStream& rng) const {
  State s(11, 0.0);
  const double mid = (config_.height - config_.paddle) / 2;
  s[kY0] = mid;
  s[kY1] = mid;
  s[kY2] = mid;
  s[kY3] = mid;
  serve(s, rng);
  return s;
}

StepResult TeamPong::step(const State& state,
                          const std::vector<Action>& actions,
                          RngStream& rng) const {
  if (actions.size() != 4) throw std::invalid_argument("team_pong: need 4 actions");
  for (int i = 0; i < 4; ++i) {
    if (!action_space(i).contains(actions[static_cast<std::size_t>(i)])) {
      throw std::invalid_argument("team_pong: action outside space");
    }
  }
  const int h = config_.height;
  const int w = config_.width;
  const int max_y = h - config_.paddle;

  State next = state;
  next[kStep] = state[kStep] + 1;
  for (int i = 0; i < 4; ++i) {
    const int a = actions[static_cast<std::size_t>(i)].discrete;
    int y = static_cast<int>(next[static_cast<std::size_t>(kY0 + i)]);
    if (a == kUp) y -= 1;
    if (a == kDown) y += 1;
    if (y < 0) y = 0;
    if (y > max_y) y = max_y;
    next[static_cast<std::size_t>(kY0 + i)] = y;
  }

  int by = static_cast<int>(state[kBallY]) + static_cast<int>(state[kVelY]);
  int vy = static_cast<int>(state[kVelY]);
  if (by < 0) {
    by = -by;
    vy = -vy;
  } else if (by > h - 1) {
    by = 2 * (h - 1) - by;
    vy = -vy;
  }
  int bx = static_cast<int>(state[kBallX]) + static_cast<int>(state[kVelX]);
  int vx = static_cast<int>(state[kVelX]);

  auto covers = (+[](int py, int paddle, int y) {
    return y >= py && y < py + paddle;
  });

  StepResult res;
  res.rewards = {0.0, 0.0, 0.0, 0.0};
  int point_for = -1;  // 0 = left team scores, 1 = right team scores
  if (bx == 1 && vx < 0) {
    if (covers(static_cast<int>(next[kY1]), config_.paddle, by)) {
      vx = 1;
    }
  } else if (bx == w - 2 && vx > 0) {
    if (covers(static_cast<int>(next[kY3]), config_.paddle, by)) {
      vx = -1;
    }
  } else if (bx <= 0) {
    if (covers(static_cast<int>(next[kY0]), config_.paddle, by)) {
      bx = 0;
      vx = 1;
    } else {
      point_for = 1;
    }
  } else if (bx >= w - 1) {
    if (covers(static_cast<int>(next[kY2]), config_.paddle, by)) {
      bx = w - 1;
      vx = -1;
    } else {
      point_for = 0;
    }
  }

  if (point_for >= 0) {
    const double sign = point_for == 0 ? 1.0 : -1.0;
    res.rewards = {sign, sign, -sign, -sign};
    const int slot = point_for == 0 ? kScoreL : kScoreR;
    next[static_cast<std::size_t>(slot)] = state[static_cast<std::size_t>(slot)] + 1;
    if (static_cast<int>(next[static_cast<std::size_t>(slot)]) >=
        config_.points_to_win) {
      res.done = true;
      next[kBallX] = w / 2;
      next[kBallY] = h / 2;
      next[kVelX] = 0;
      next[kVelY] = 0;
    } else {
      serve(next, rng);
    }
  } else {
    next[kBallX] = bx;
    next[kBallY] = by;
    next[kVelX] = vx;
    next[kVelY] = vy;
  }
  res.next = std::move(next);
  return res;
}

Observation TeamPong::observe(const State& state, int role) const {
  if (role < 0 || role >= 4) throw std::invalid_argument("team_pong: bad role");
  Observation obs;
  obs.role = role;
  obs.step = static_cast<int>(state[kStep]);
  const bool left = team_of(role) == 0;
  const int w = config_.width;
  const int self_slot = kY0 + role;
  const int mate_slot = kY0 + (role ^ 1);
  const int opp_front = left ? kY3 : kY1;
  const int opp_back = left ? kY2 : kY0;
  obs.frame = {
      state[static_cast<std::size_t>(self_slot)],
      state[static_cast<std::size_t>(mate_slot)],
      state[static_cast<std::size_t>(opp_front)],
      state[static_cast<std::size_t>(opp_back)],
      left ? state[kBallX] : (w - 1) - state[kBallX],
      state[kBallY],
      left ? state[kVelX] : -state[kVelX],
      state[kVelY],
      left ? state[kScoreL] : state[kScoreR],
      left ? state[kScoreR] : state[kScoreL],
  };
  return obs;
}

std::vector<double> TeamPong::tracked_coords(const Observation& obs,
                                             int target_role) const {
  if (target_role == obs.role) return {obs.frame[0]};
  if (team_of(target_role) == team_of(obs.role)) return {obs.frame[1]};
  const bool target_front = target_role == 1 || target_role == 3;
  return {target_front ? obs.frame[2] : obs.frame[3]};
}

Action TeamPong::action_from_coord_delta(std::span<const double> delta) const {
  if (delta.size() != 1) {
    throw std::invalid_argument("team_pong: delta must be (dy)");
  }
  const int dy = static_cast<int>(delta[0]);
  if (dy == -1) return Action::of(kUp);
  if (dy == 1) return Action::of(kDown);
  if (dy == 0) return Action::of(kNoop);
  throw std::invalid_argument("team_pong: delta is not a legal move");
}

std::string TeamPong::config_text() const {
  nlohmann::json j;
  j["name"] = name_;
  j["width"] = config_.width;
  j["height"] = config_.height;
  j["paddle"] = config_.paddle;
  j["points_to_win"] = config_.points_to_win;
  j["episode_step_cap"] = config_.episode_step_cap;
  j["mode"] = config_.mode == GameMode::kCompetitive ? "competitive"
                                                     : "cooperative_pair";
  return j.dump();
}

std::unique_ptr<MarkovGame> make_team_pong(const TeamPongConfig& config) {
  return std::make_unique<TeamPong>(config);
}

std::unique_ptr<Policy> make_team_pong_tracker(const MarkovGame& game,
                                               int role) {
  const auto* pong = dynamic_cast<const TeamPong*>(&game);
  if (pong == nullptr) {
    throw std::invalid_argument("tracker: game is not team_pong");
  }
  const auto& cfg = pong->config();
  const bool front = role == 1 || role == 3;
  PaddleTrackerPolicy::Layout l;
  l.ball_x_slot = 4;
  l.ball_y_slot = 5;
  l.vel_x_slot = 6;
  l.vel_y_slot = 7;
  l.width = cfg.width;
  l.height = cfg.height;
  l.paddle = cfg.paddle;
  l.own_col = front ? 1 : 0;
  l.far_flip_col = cfg.width - 2;  // the opposing front paddle's column
  l.up = TeamPong::kUp;
  l.down = TeamPong::kDown;
  l.noop = TeamPong::kNoop;
  return std::make_unique<PaddleTrackerPolicy>(game, role, l);
}

}  // namespace scablab::envs
