// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCABLAB_ATTACK_FSM_HPP_
#define SCABLAB_ATTACK_FSM_HPP_

#include <cstdint>
#include <memory>
#include <vector>

#include "scablab/attack/sequence.hpp"
#include "scablab/forge/bundle.hpp"
#include "scablab/game.hpp"
#include "scablab/policy.hpp"

namespace scablab::attack {

// The attacker's four-state machine. Timing convention (uniform next-step
// dispatch): the step on which a transition is decided still acts under the
// old state's rule, so with a Bernoulli hit at step j-1 the trigger occupies
// steps j..j+h-1, the victim's answer window is j+h..j+h+g-1, and the
// detector (which always lags the victim by one step) compares at steps
// j+h+1..j+h+g with j+h as a non-comparing sync step.
struct FsmState {
  FsmTag tag = FsmTag::kWinning;
  int trigger_cursor = 0;        // next trigger element to emit
  int observe_cursor = -1;       // -1 = sync step pending, else next compare
  double reward_accumulator = 0.0;
  int rewarding_steps = 0;       // bribe/penalty actions executed so far
  std::vector<int> completion_log;  // completed timesteps within the episode
};

// Externally resolved per-step inputs. Only the fields the current tag
// consumes are read: Winning takes tip_draw + std_action; Triggering takes
// nothing; Observing takes std_action plus the detector verdict once the
// sync step has passed; Rewarding/Penalizing take rwd_action and the reward
// produced by the previous step.
struct FsmInputs {
  bool tip_draw = false;
  Action std_action;
  Action rwd_action;
  Action detected_action;
  double detect_confidence = 0.0;
  double last_attacker_reward = 0.0;
};

struct FsmStepOutput {
  Action action;
  FsmState next;
  StepEvents events;  // events.tag = state the action was chosen under
};

// One transition. Pure in (state, inputs) so the exhaustive oracle can draw
// the same decision scripts through both implementations. `step` is the
// engine step the action will be taken at (used for the completion log).
// Competitive mode: Observing mismatch falls back to Winning, a full match
// enters Rewarding. Cooperative mode inverts: mismatch enters Penalizing,
// a full match returns to Winning with no penalty. A detector verdict with
// confidence below 0.5 counts as mismatch.
FsmStepOutput fsm_step(const FsmState& fsm, const FsmInputs& inputs,
                       const ActionSequence& trigger,
                       const ActionSequence& backdoor,
                       const forge::AttackConfig& config, GameMode mode,
                       int step);

// Engine-facing wrapper: owns the thawed bundle policies, the detector, the
// dedicated TIP stream, and the FsmState; resolves FsmInputs each step and
// defers to fsm_step. With tip == 0 it degenerates to the cover policy
// outright — no TIP draws, no events — so a poisoned run is byte-identical
// to a clean one.
class ScabAttackerPolicy final : public Policy {
 public:
  ScabAttackerPolicy(const MarkovGame& game,
                     const forge::AttackerBundle& bundle,
                     const forge::AttackConfig& config, std::uint64_t seed);

  void begin_episode() override;
  Action act(ObsWindow window, RngStream& rng) override;
  void feed_reward(double reward) override { last_reward_ = reward; }
  StepEvents last_events() const override { return events_; }

  const FsmState& fsm() const { return fsm_; }

  // Lifetime totals for the realized trigger-injection report: Bernoulli
  // draws happen only on Winning steps, and triggers cut off by episode end
  // never count as completed.
  std::int64_t tip_draws() const { return tip_draws_; }
  std::int64_t tip_successes() const { return tip_successes_; }
  std::int64_t triggers_completed() const { return triggers_completed_; }
  std::int64_t completions() const { return completions_; }

 private:
  const MarkovGame* game_;
  GameMode mode_;
  forge::AttackConfig config_;
  forge::Detector detector_;
  ActionSequence trigger_;
  ActionSequence backdoor_;
  std::unique_ptr<Policy> std_policy_;
  std::unique_ptr<Policy> rwd_policy_;
  RngStream tip_rng_;
  int k_ = 2;

  FsmState fsm_;
  StepEvents events_;
  double last_reward_ = 0.0;
  std::int64_t tip_draws_ = 0;
  std::int64_t tip_successes_ = 0;
  std::int64_t triggers_completed_ = 0;
  std::int64_t completions_ = 0;
};

}  // namespace scablab::attack

#endif  // SCABLAB_ATTACK_FSM_HPP_
