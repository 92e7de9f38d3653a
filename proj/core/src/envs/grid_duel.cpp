// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#include "scablab/envs/grid_duel.hpp"

#include <json.hpp>

#include <stdexcept>

namespace scablab::envs {

namespace {
// State vector layout.
enum : int {
  kStep = 0,
  kRound = 1,
  kStepInRound = 2,
  kRow0 = 3,
  kCol0 = 4,
  kRow1 = 5,
  kCol1 = 6,
  kWins0 = 7,
  kWins1 = 8,
  kBoard = 9,
};

constexpr std::array<int, 5> kDr = {-1, 1, 0, 0, 0};  // up down left right noop
constexpr std::array<int, 5> kDc = {0, 0, -1, 1, 0};
}  // namespace

GridDuel::GridDuel(const GridDuelConfig& config) : config_(config) {
  if (config_.board_size < 5 || config_.board_size % 2 == 0) {
    throw std::invalid_argument("grid_duel: board_size must be odd and >= 5");
  }
  if (config_.rounds_per_episode < 1) {
    throw std::invalid_argument("grid_duel: rounds_per_episode must be >= 1");
  }
  round_cap_ = config_.round_step_cap > 0
                   ? config_.round_step_cap
                   : config_.board_size * config_.board_size;
}

ActionSpace GridDuel::action_space(int role) const {
  if (role < 0 || role >= 2) throw std::invalid_argument("grid_duel: bad role");
  return ActionSpace::discrete({"up", "down", "left", "right", "noop"});
}

int GridDuel::step_cap() const {
  return config_.rounds_per_episode * round_cap_;
}

State GridDuel::fresh_round_state(int round, int wins0, int wins1, int step,
                                  RngStream& rng) const {
  const int b = config_.board_size;
  State s(static_cast<std::size_t>(kBoard + b * b), 0.0);
  s[kStep] = step;
  s[kRound] = round;
  s[kStepInRound] = 0;
  // Mirror-symmetric start; the shared row offset is the only start-state
  // randomness.
  const int row = b / 2 + rng.uniform_int(-1, 1);
  s[kRow0] = row;
  s[kCol0] = 1;
  s[kRow1] = row;
  s[kCol1] = b - 2;
  s[kWins0] = wins0;
  s[kWins1] = wins1;
  return s;
}

State GridDuel::initial_state(RngStream& rng) const {
  return fresh_round_state(0, 0, 0, 0, rng);
}

StepResult GridDuel::step(const State& state,
                          const std::vector<Action>& actions,
                          RngStream& rng) const {
  if (actions.size() != 2) throw std::invalid_argument("grid_duel: need 2 actions");
  for (int i = 0; i < 2; ++i) {
    if (!action_space(i).contains(actions[static_cast<std::size_t>(i)])) {
      throw std::invalid_argument("grid_duel: action outside space");
    }
  }
  const int b = config_.board_size;
  const int round = static_cast<int>(state[kRound]);
  if (round >= config_.rounds_per_episode) {
    throw std::invalid_argument("grid_duel: step on terminal state");
  }

  const std::array<int, 2> row = {static_cast<int>(state[kRow0]),
                                  static_cast<int>(state[kRow1])};
  const std::array<int, 2> col = {static_cast<int>(state[kCol0]),
                                  static_cast<int>(state[kCol1])};
  std::array<int, 2> trow{};
  std::array<int, 2> tcol{};
  for (int i = 0; i < 2; ++i) {
    const int a = actions[static_cast<std::size_t>(i)].discrete;
    trow[static_cast<std::size_t>(i)] = row[static_cast<std::size_t>(i)] + kDr[static_cast<std::size_t>(a)];
    tcol[static_cast<std::size_t>(i)] = col[static_cast<std::size_t>(i)] + kDc[static_cast<std::size_t>(a)];
  }

  std::array<bool, 2> crash = {false, false};
  for (int i = 0; i < 2; ++i) {
    const int j = 1 - i;
    const int tr = trow[static_cast<std::size_t>(i)];
    const int tc = tcol[static_cast<std::size_t>(i)];
    if (tr < 0 || tr >= b || tc < 0 || tc >= b) {
      crash[static_cast<std::size_t>(i)] = true;
      continue;
    }
    if (state[static_cast<std::size_t>(kBoard + cell(tr, tc))] != 0.0) {
      crash[static_cast<std::size_t>(i)] = true;
      continue;
    }
    const bool moved = tr != row[static_cast<std::size_t>(i)] ||
                       tc != col[static_cast<std::size_t>(i)];
    // Opponent's current cell is lethal whether they stay (occupied) or
    // leave (fresh trail). Matching targets collide head-to-head.
    if (moved && tr == row[static_cast<std::size_t>(j)] &&
        tc == col[static_cast<std::size_t>(j)]) {
      crash[static_cast<std::size_t>(i)] = true;
      continue;
    }
    if (moved && tr == trow[static_cast<std::size_t>(j)] &&
        tc == tcol[static_cast<std::size_t>(j)]) {
      crash[static_cast<std::size_t>(i)] = true;
    }
  }

  StepResult res;
  res.rewards = {0.0, 0.0};
  const int step_in_round = static_cast<int>(state[kStepInRound]) + 1;
  const bool timeout = step_in_round >= round_cap_;

  if (crash[0] || crash[1] || timeout) {
    int wins0 = static_cast<int>(state[kWins0]);
    int wins1 = static_cast<int>(state[kWins1]);
    if (crash[0] && !crash[1]) {
      res.rewards = {-1.0, 1.0};
      ++wins1;
    } else if (crash[1] && !crash[0]) {
      res.rewards = {1.0, -1.0};
      ++wins0;
    }
    const int next_round = round + 1;
    res.done = next_round >= config_.rounds_per_episode;
    if (res.done) {
      State terminal(state.size(), 0.0);
      terminal[kStep] = state[kStep] + 1;
      terminal[kRound] = next_round;
      terminal[kRow0] = b / 2;
      terminal[kCol0] = 1;
      terminal[kRow1] = b / 2;
      terminal[kCol1] = b - 2;
      terminal[kWins0] = wins0;
      terminal[kWins1] = wins1;
      res.next = std::move(terminal);
    } else {
      res.next = fresh_round_state(next_round, wins0, wins1,
                                   static_cast<int>(state[kStep]) + 1, rng);
    }
    return res;
  }

  State next = state;
  next[kStep] = state[kStep] + 1;
  next[kStepInRound] = step_in_round;
  for (int i = 0; i < 2; ++i) {
    const bool moved = trow[static_cast<std::size_t>(i)] != row[static_cast<std::size_t>(i)] ||
                       tcol[static_cast<std::size_t>(i)] != col[static_cast<std::size_t>(i)];
    if (moved) {
      next[static_cast<std::size_t>(
          kBoard + cell(row[static_cast<std::size_t>(i)],
                        col[static_cast<std::size_t>(i)]))] = 1.0;
    }
  }
  next[kRow0] = trow[0];
  next[kCol0] = tcol[0];
  next[kRow1] = trow[1];
  next[kCol1] = tcol[1];
  res.next = std::move(next);
  res.done = false;
  return res;
}

Observation GridDuel::observe(const State& state, int role) const {
  if (role < 0 || role >= 2) throw std::invalid_argument("grid_duel: bad role");
  const int b = config_.board_size;
  Observation obs;
  obs.role = role;
  obs.step = static_cast<int>(state[kStep]);
  obs.frame.assign(static_cast<std::size_t>(b * b + 8), 0.0);
  for (int i = 0; i < b * b; ++i) {
    obs.frame[static_cast<std::size_t>(i)] =
        state[static_cast<std::size_t>(kBoard + i)];
  }
  const int self_row = static_cast<int>(role == 0 ? state[kRow0] : state[kRow1]);
  const int self_col = static_cast<int>(role == 0 ? state[kCol0] : state[kCol1]);
  const int opp_row = static_cast<int>(role == 0 ? state[kRow1] : state[kRow0]);
  const int opp_col = static_cast<int>(role == 0 ? state[kCol1] : state[kCol0]);
  if (static_cast<int>(state[kRound]) < config_.rounds_per_episode) {
    obs.frame[static_cast<std::size_t>(cell(self_row, self_col))] = 2.0;
    obs.frame[static_cast<std::size_t>(cell(opp_row, opp_col))] = 3.0;
  }
  const std::size_t base = static_cast<std::size_t>(b * b);
  obs.frame[base + 0] = self_row;
  obs.frame[base + 1] = self_col;
  obs.frame[base + 2] = opp_row;
  obs.frame[base + 3] = opp_col;
  obs.frame[base + 4] = state[kRound];
  obs.frame[base + 5] = role == 0 ? state[kWins0] : state[kWins1];
  obs.frame[base + 6] = role == 0 ? state[kWins1] : state[kWins0];
  obs.frame[base + 7] = state[kStepInRound];
  return obs;
}

std::vector<double> GridDuel::tracked_coords(const Observation& obs,
                                             int target_role) const {
  const std::size_t base =
      static_cast<std::size_t>(config_.board_size * config_.board_size);
  if (target_role == obs.role) return {obs.frame[base], obs.frame[base + 1]};
  return {obs.frame[base + 2], obs.frame[base + 3]};
}

Action GridDuel::action_from_coord_delta(std::span<const double> delta) const {
  if (delta.size() != 2) {
    throw std::invalid_argument("grid_duel: delta must be (drow, dcol)");
  }
  const int dr = static_cast<int>(delta[0]);
  const int dc = static_cast<int>(delta[1]);
  for (int a = 0; a < 5; ++a) {
    if (kDr[static_cast<std::size_t>(a)] == dr &&
        kDc[static_cast<std::size_t>(a)] == dc) {
      return Action::of(a);
    }
  }
  throw std::invalid_argument("grid_duel: delta is not a legal move");
}

bool GridDuel::window_valid(const Observation& prev,
                            const Observation& cur) const {
  if (cur.step != prev.step + 1) return false;
  const std::size_t base =
      static_cast<std::size_t>(config_.board_size * config_.board_size);
  // Same round and contiguous in-round step; crash and timeout resets fail.
  return prev.frame[base + 4] == cur.frame[base + 4] &&
         cur.frame[base + 7] == prev.frame[base + 7] + 1.0;
}

std::string GridDuel::config_text() const {
  nlohmann::json j;
  j["name"] = name_;
  j["board_size"] = config_.board_size;
  j["rounds_per_episode"] = config_.rounds_per_episode;
  j["round_step_cap"] = round_cap_;
  return j.dump();
}

std::unique_ptr<MarkovGame> make_grid_duel(const GridDuelConfig& config) {
  return std::make_unique<GridDuel>(config);
}

}  // namespace scablab::envs
