// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCABLAB_POLICY_HPP_
#define SCABLAB_POLICY_HPP_

#include <cstdint>

#include "scablab/game.hpp"

namespace scablab {

enum class FsmTag : std::uint8_t {
  kNone = 0,
  kWinning,
  kTriggering,
  kObserving,
  kRewarding,
  kPenalizing,
};

const char* fsm_tag_name(FsmTag tag);

// Per-step annotations a policy may raise; the episode runner folds them
// into the trace. Only the attack machine reports a non-kNone tag.
struct StepEvents {
  FsmTag tag = FsmTag::kNone;
  bool trigger_started = false;    // first element of a trigger emitted
  bool trigger_completed = false;  // full trigger emitted (injection counted)
  bool completion = false;         // backdoor sequence verified this step
  bool rewarding_entered = false;
  bool rewarding_exited = false;
};

class Policy {
 public:
  virtual ~Policy() = default;

  // `window` is the episode's observation history for this role, newest
  // last. `rng` is the role's episode stream; stateless policies may ignore
  // it but must not consume draws they do not need.
  virtual Action act(ObsWindow window, RngStream& rng) = 0;

  virtual void begin_episode() {}
  // Own-role reward produced by the previous step's joint action.
  virtual void feed_reward(double /*reward*/) {}
  // Events raised by the most recent act().
  virtual StepEvents last_events() const { return {}; }
};

}  // namespace scablab

#endif  // SCABLAB_POLICY_HPP_
