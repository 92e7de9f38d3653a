// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCABLAB_EXPLOIT_COMPOSE_HPP_
#define SCABLAB_EXPLOIT_COMPOSE_HPP_

#include <cstdint>

#include "scablab/attack/sequence.hpp"
#include "scablab/exploit/trigger_net.hpp"
#include "scablab/game.hpp"
#include "scablab/policy.hpp"

namespace scablab::exploit {

// Test-time composition: a two-state machine over an arbitrary opponent
// policy. On a quiet step the trigger network scores the current window; a
// positive score starts the trigger immediately (this very step emits the
// first element). Mid-sequence scores are ignored — no re-trigger until the
// sequence completes. Steps are tagged so traces carry the fire flags the
// exploitation objective counts.
class ComposedExploitPolicy final : public Policy {
 public:
  ComposedExploitPolicy(const MarkovGame& game, int op_role, Policy* op_policy,
                        const TriggerNetwork* net,
                        attack::ActionSequence trigger);

  void begin_episode() override;
  Action act(ObsWindow window, RngStream& rng) override;
  StepEvents last_events() const override { return events_; }

  std::int64_t fires() const { return fires_; }

 private:
  const MarkovGame* game_;
  int op_role_;
  Policy* op_;
  const TriggerNetwork* net_;
  attack::ActionSequence trigger_;
  int cursor_ = -1;  // -1 quiet, else next trigger element
  StepEvents events_;
  std::int64_t fires_ = 0;
};

// Fixed-position injection for success measurement: emits the trigger at
// steps [fire_step, fire_step + h) and the opponent policy everywhere else.
class SingleInjectionPolicy final : public Policy {
 public:
  SingleInjectionPolicy(Policy* op_policy, attack::ActionSequence trigger,
                        int fire_step);

  void begin_episode() override;
  Action act(ObsWindow window, RngStream& rng) override;
  StepEvents last_events() const override { return events_; }

 private:
  Policy* op_;
  attack::ActionSequence trigger_;
  int fire_step_;
  int step_ = 0;
  StepEvents events_;
};

// Deterministic proportion scheduler: a carry accumulator gains the target
// fraction every step and each burst drains h, so the realized trigger-step
// fraction converges on the target exactly. Bursts start the step after the
// accumulator crosses h (the crossing step still plays the opponent
// policy), which caps the reachable fraction at h/(h+1). The accumulator
// carries across episodes; a burst cut off by an episode end is abandoned.
class ProportionInjectionPolicy final : public Policy {
 public:
  ProportionInjectionPolicy(Policy* op_policy, attack::ActionSequence trigger,
                            double proportion);

  void begin_episode() override;
  Action act(ObsWindow window, RngStream& rng) override;
  StepEvents last_events() const override { return events_; }

  std::int64_t trigger_steps() const { return trigger_steps_; }
  std::int64_t total_steps() const { return total_steps_; }

 private:
  Policy* op_;
  attack::ActionSequence trigger_;
  double proportion_;
  double acc_ = 0.0;
  int cursor_ = -1;  // -1 quiet, else next trigger element
  StepEvents events_;
  std::int64_t trigger_steps_ = 0;
  std::int64_t total_steps_ = 0;
};

}  // namespace scablab::exploit

#endif  // SCABLAB_EXPLOIT_COMPOSE_HPP_
