// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCABLAB_EPISODE_HPP_
#define SCABLAB_EPISODE_HPP_

#include <functional>
#include <vector>

#include "scablab/policy.hpp"
#include "scablab/trace.hpp"

namespace scablab {

// Per-role transition delivered after every engine step. `before` ends at
// the observation the action was chosen from; `after` includes the next
// observation. Views are only valid during the callback.
struct Transition {
  int role = 0;
  ObsWindow before;
  Action action;
  double reward = 0.0;
  ObsWindow after;
  bool done = false;
};

struct EpisodeHooks {
  std::function<void(const Transition&)> on_transition;
};

struct EpisodeOptions {
  int step_cap_override = -1;  // <= 0 means use the game's cap
  bool verbose_frames = false;
  DiscountSpec discount{};
};

// Tamper points used only by the observation/reward-poisoning baseline in
// defense/. The supply-chain attack path never installs these; a unit test
// pins that run_episode and the poisoned runner produce identical traces
// when no tamper functions are set.
struct Interference {
  // May rewrite the observation delivered to one role (and to its history).
  std::function<void(int role, int step, Observation&)> observation;
  // May rewrite one role's reward given its (possibly tampered) window and
  // the action it just took.
  std::function<double(int role, int step, ObsWindow window,
                       const Action& action, double reward)>
      reward;
};

// Runs one episode with simultaneous moves. Streams are derived from `seed`
// by name ("env" plus "policy/<role-name>"), so a replay with the same seed
// and identically behaving policies is byte-identical.
EpisodeTrace run_episode(const MarkovGame& game,
                         const std::vector<Policy*>& policies,
                         std::uint64_t seed, const EpisodeHooks& hooks = {},
                         const EpisodeOptions& opts = {});

EpisodeTrace run_episode_interfered(const MarkovGame& game,
                                    const std::vector<Policy*>& policies,
                                    std::uint64_t seed,
                                    const Interference& interference,
                                    const EpisodeHooks& hooks = {},
                                    const EpisodeOptions& opts = {});

}  // namespace scablab

#endif  // SCABLAB_EPISODE_HPP_
