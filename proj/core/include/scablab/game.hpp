// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCABLAB_GAME_HPP_
#define SCABLAB_GAME_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "scablab/action.hpp"
#include "scablab/rng.hpp"

namespace scablab {

// All built-in game states are flat double vectors with a game-private
// layout. This keeps stepping value-semantic and makes digests canonical.
using State = std::vector<double>;

enum class GameMode { kCompetitive, kCooperativePair };

struct Observation {
  int role = 0;
  int step = 0;
  std::vector<double> frame;
};

// Newest observation last. Engine hands each policy the full episode history;
// consumers take the suffix they need.
using ObsWindow = std::span<const Observation>;

struct DiscountSpec {
  double gamma = 0.99;  // must lie in [0, 1)
};

// Sum of gamma^k * rewards[k]. Throws std::invalid_argument for gamma
// outside [0, 1).
double discounted_return(std::span<const double> rewards,
                         const DiscountSpec& discount);

struct StepResult {
  State next;
  std::vector<double> rewards;  // one per role
  bool done = false;
};

// Simultaneous-move Markov game. step() and observe() are pure given the
// rng stream state; all stochasticity flows through the passed stream.
class MarkovGame {
 public:
  virtual ~MarkovGame() = default;

  virtual const std::string& name() const = 0;
  virtual GameMode mode() const = 0;
  virtual int num_roles() const = 0;
  virtual const std::vector<std::string>& role_names() const = 0;
  virtual ActionSpace action_space(int role) const = 0;
  // Hard per-episode step cap; run_episode truncates here if the game has
  // not raised its done flag earlier.
  virtual int step_cap() const = 0;

  virtual State initial_state(RngStream& rng) const = 0;
  // Throws std::invalid_argument if any action is outside its role's space.
  virtual StepResult step(const State& state,
                          const std::vector<Action>& actions,
                          RngStream& rng) const = 0;
  virtual Observation observe(const State& state, int role) const = 0;

  // Coordinates inside `obs` that track `target_role`'s avatar. Used by the
  // forge detector and by learner featurizers; everything returned is plainly
  // present in the frame, this is only a layout accessor.
  virtual std::vector<double> tracked_coords(const Observation& obs,
                                             int target_role) const = 0;

  // Effective discrete action implied by a tracked-coordinate delta (blocked
  // moves resolve to what actually happened). Continuous games divide the
  // delta by their move scale instead; see effective_box_action.
  virtual Action action_from_coord_delta(std::span<const double> delta) const;

  // Whether two consecutive observations form a within-dynamics window (e.g.
  // not straddling a board reset). Detector datasets skip invalid windows.
  virtual bool window_valid(const Observation& prev,
                            const Observation& cur) const;

  // JSON text of the construction config; hashed into trace headers.
  virtual std::string config_text() const = 0;
};

int role_index(const MarkovGame& game, const std::string& role_name);

}  // namespace scablab

#endif  // SCABLAB_GAME_HPP_
