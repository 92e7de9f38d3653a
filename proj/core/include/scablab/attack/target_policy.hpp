// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCABLAB_ATTACK_TARGET_POLICY_HPP_
#define SCABLAB_ATTACK_TARGET_POLICY_HPP_

#include "scablab/attack/sequence.hpp"
#include "scablab/policy.hpp"

namespace scablab::attack {

// What a perfectly backdoored victim does: its ordinary policy everywhere,
// except that for the g steps starting at `window_start` (the first step
// after the trigger finishes) it answers with the backdoor sequence. This
// is the specification oracle used by tests and by the trigger-success
// definition — trained victims are measured against it, never built from it.
Action backdoor_target_action(int t, int window_start,
                              const ActionSequence& backdoor,
                              const Action& fallback);

// Policy wrapper around the oracle for scripted evaluation episodes. The
// caller announces where the answer window starts (engine step index);
// outside the window the fallback policy acts. A negative start means "no
// trigger this episode".
class BackdoorTargetPolicy final : public Policy {
 public:
  BackdoorTargetPolicy(ActionSequence backdoor, Policy* fallback)
      : backdoor_(std::move(backdoor)), fallback_(fallback) {}

  void set_window_start(int step) { window_start_ = step; }

  void begin_episode() override { fallback_->begin_episode(); }

  Action act(ObsWindow window, RngStream& rng) override {
    const int t = window.back().step;
    if (window_start_ >= 0 && t >= window_start_ &&
        t < window_start_ + backdoor_.size()) {
      return backdoor_.actions[static_cast<std::size_t>(t - window_start_)];
    }
    return fallback_->act(window, rng);
  }

 private:
  ActionSequence backdoor_;
  Policy* fallback_;
  int window_start_ = -1;
};

}  // namespace scablab::attack

#endif  // SCABLAB_ATTACK_TARGET_POLICY_HPP_
