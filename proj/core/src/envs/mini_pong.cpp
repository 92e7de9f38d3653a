// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#include "scablab/envs/mini_pong.hpp"

#include <json.hpp>

#include <stdexcept>

namespace scablab::envs {

namespace {
enum : int {
  kStep = 0,
  kLeftY = 1,
  kRightY = 2,
  kBallX = 3,
  kBallY = 4,
  kVelX = 5,
  kVelY = 6,
  kScoreL = 7,
  kScoreR = 8,
};
}  // namespace

MiniPong::MiniPong(const MiniPongConfig& config) : config_(config) {
  if (config_.width < 5 || config_.height < 3) {
    throw std::invalid_argument("mini_pong: court too small");
  }
  if (config_.paddle < 1 || config_.paddle >= config_.height) {
    throw std::invalid_argument("mini_pong: bad paddle size");
  }
}

ActionSpace MiniPong::action_space(int role) const {
  if (role < 0 || role >= 2) throw std::invalid_argument("mini_pong: bad role");
  return ActionSpace::discrete({"up", "down", "noop"});
}

void MiniPong::serve(State& s, RngStream& rng) const {
  s[kBallX] = config_.width / 2;
  s[kBallY] = config_.height / 2;
  // Diagonal serves only. A horizontal serve into two paddles that cover
  // the center row would rally forever, a degenerate attractor.
  const int pick = static_cast<int>(rng.next_below(4));
  s[kVelX] = pick < 2 ? -1 : 1;
  s[kVelY] = (pick % 2) * 2 - 1;
}

State MiniPong::initial_state(RngStream& rng) const {
  State s(9, 0.0);
  s[kLeftY] = (config_.height - config_.paddle) / 2;
  s[kRightY] = (config_.height - config_.paddle) / 2;
  serve(s, rng);
  return s;
}

StepResult MiniPong::step(const State& state,
                          const std::vector<Action>& actions,
                          RngStream& rng) const {
  if (actions.size() != 2) throw std::invalid_argument("mini_pong: need 2 actions");
  for (int i = 0; i < 2; ++i) {
    if (!action_space(i).contains(actions[static_cast<std::size_t>(i)])) {
      throw std::invalid_argument("mini_pong: action outside space");
    }
  }
  const int h = config_.height;
  const int w = config_.width;
  const int max_y = h - config_.paddle;

  State next = state;
  next[kStep] = state[kStep] + 1;
  // Paddle moves clamp at the walls: a blocked move is an effective noop.
  auto move_paddle = [&](int idx, int a) {
    int y = static_cast<int>(next[static_cast<std::size_t>(idx)]);
    if (a == kUp) y -= 1;
    if (a == kDown) y += 1;
    if (y < 0) y = 0;
    if (y > max_y) y = max_y;
    next[static_cast<std::size_t>(idx)] = y;
  };
  move_paddle(kLeftY, actions[0].discrete);
  move_paddle(kRightY, actions[1].discrete);

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

  StepResult res;
  res.rewards = {0.0, 0.0};
  int point_for = -1;  // 0 = left scores, 1 = right scores
  if (bx <= 0) {
    const int py = static_cast<int>(next[kLeftY]);
    if (by >= py && by < py + config_.paddle) {
      bx = 0;
      vx = 1;
    } else {
      point_for = 1;
    }
  } else if (bx >= w - 1) {
    const int py = static_cast<int>(next[kRightY]);
    if (by >= py && by < py + config_.paddle) {
      bx = w - 1;
      vx = -1;
    } else {
      point_for = 0;
    }
  }

  if (point_for >= 0) {
    res.rewards[static_cast<std::size_t>(point_for)] = 1.0;
    res.rewards[static_cast<std::size_t>(1 - point_for)] = -1.0;
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

Observation MiniPong::observe(const State& state, int role) const {
  if (role < 0 || role >= 2) throw std::invalid_argument("mini_pong: bad role");
  Observation obs;
  obs.role = role;
  obs.step = static_cast<int>(state[kStep]);
  const bool left = role == 0;
  const int w = config_.width;
  obs.frame = {
      left ? state[kLeftY] : state[kRightY],
      left ? state[kRightY] : state[kLeftY],
      left ? state[kBallX] : (w - 1) - state[kBallX],
      state[kBallY],
      left ? state[kVelX] : -state[kVelX],
      state[kVelY],
      left ? state[kScoreL] : state[kScoreR],
      left ? state[kScoreR] : state[kScoreL],
  };
  return obs;
}

std::vector<double> MiniPong::tracked_coords(const Observation& obs,
                                             int target_role) const {
  return {target_role == obs.role ? obs.frame[0] : obs.frame[1]};
}

Action MiniPong::action_from_coord_delta(std::span<const double> delta) const {
  if (delta.size() != 1) {
    throw std::invalid_argument("mini_pong: delta must be (dy)");
  }
  const int dy = static_cast<int>(delta[0]);
  if (dy == -1) return Action::of(kUp);
  if (dy == 1) return Action::of(kDown);
  if (dy == 0) return Action::of(kNoop);
  throw std::invalid_argument("mini_pong: delta is not a legal move");
}

std::string MiniPong::config_text() const {
  nlohmann::json j;
  j["name"] = name_;
  j["width"] = config_.width;
  j["height"] = config_.height;
  j["paddle"] = config_.paddle;
  j["points_to_win"] = config_.points_to_win;
  j["episode_step_cap"] = config_.episode_step_cap;
  return j.dump();
}

std::unique_ptr<MarkovGame> make_mini_pong(const MiniPongConfig& config) {
  return std::make_unique<MiniPong>(config);
}

PaddleTrackerPolicy::PaddleTrackerPolicy(const MarkovGame& game, int role,
                                         Layout layout)
    : game_(game), role_(role), layout_(layout) {}

Action PaddleTrackerPolicy::act(ObsWindow window, RngStream&) {
  const Observation& obs = window.back();
  const Layout& l = layout_;
  const int own_y = static_cast<int>(game_.tracked_coords(obs, role_)[0]);
  int bx = static_cast<int>(obs.frame[static_cast<std::size_t>(l.ball_x_slot)]);
  int by = static_cast<int>(obs.frame[static_cast<std::size_t>(l.ball_y_slot)]);
  int vx = static_cast<int>(obs.frame[static_cast<std::size_t>(l.vel_x_slot)]);
  int vy = static_cast<int>(obs.frame[static_cast<std::size_t>(l.vel_y_slot)]);
  if (vx == 0) return Action::of(l.noop);  // frozen terminal ball

  // Predict the arrival row the next time the ball sits on the defended
  // column moving goalward. Far-side columns are assumed to return the
  // ball; a rear teammate (columns behind own_col) is assumed to do the
  // same. Wrong assumptions only shift the phase and are re-corrected on
  // the next observation, with a full court width of slack to reposition.
  int guard = 8 * (l.width + l.height);
  while (!(bx == l.own_col && vx < 0) && guard-- > 0) {
    by += vy;
    if (by < 0) {
      by = -by;
      vy = -vy;
    } else if (by > l.height - 1) {
      by = 2 * (l.height - 1) - by;
      vy = -vy;
    }
    bx += vx;
    if (bx >= l.far_flip_col && vx > 0) {
      bx = l.far_flip_col;
      vx = -1;
    } else if (bx <= 0 && vx < 0 && l.own_col > 0) {
      bx = 0;
      vx = 1;
    }
  }

  if (by < own_y) return Action::of(l.up);
  if (by > own_y + l.paddle - 1) return Action::of(l.down);
  return Action::of(l.noop);
}

std::unique_ptr<Policy> make_mini_pong_tracker(const MarkovGame& game,
                                               int role) {
  const auto* pong = dynamic_cast<const MiniPong*>(&game);
  if (pong == nullptr) {
    throw std::invalid_argument("tracker: game is not mini_pong");
  }
  const auto& cfg = pong->config();
  PaddleTrackerPolicy::Layout l;
  l.ball_x_slot = 2;
  l.ball_y_slot = 3;
  l.vel_x_slot = 4;
  l.vel_y_slot = 5;
  l.width = cfg.width;
  l.height = cfg.height;
  l.paddle = cfg.paddle;
  l.own_col = 0;
  l.far_flip_col = cfg.width - 1;
  l.up = MiniPong::kUp;
  l.down = MiniPong::kDown;
  l.noop = MiniPong::kNoop;
  return std::make_unique<PaddleTrackerPolicy>(game, role, l);
}

}  // namespace scablab::envs
