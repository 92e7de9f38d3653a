// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#include "scablab/attack/fsm.hpp"

#include <cmath>
#include <stdexcept>

namespace scablab::attack {
namespace {

bool verdict_matches(const FsmInputs& in, const ActionSequence& backdoor,
                     int cursor) {
  // An uncertain detector never pays out: confidence below 0.5 is treated
  // as a mismatch even when the inferred action happens to agree.
  if (in.detect_confidence < 0.5) return false;
  const Action& want = backdoor.actions[static_cast<std::size_t>(cursor)];
  if (in.detected_action.is_continuous() != want.is_continuous()) return false;
  return actions_match(in.detected_action, want, backdoor.tolerance);
}

FsmState reset_to_winning(const FsmState& fsm) {
  FsmState next = fsm;  // completion_log survives within the episode
  next.tag = FsmTag::kWinning;
  next.trigger_cursor = 0;
  next.observe_cursor = -1;
  next.reward_accumulator = 0.0;
  next.rewarding_steps = 0;
  return next;
}

}  // namespace

FsmStepOutput fsm_step(const FsmState& fsm, const FsmInputs& in,
                       const ActionSequence& trigger,
                       const ActionSequence& backdoor,
                       const forge::AttackConfig& config, GameMode mode,
                       int step) {
  const bool cooperative = mode == GameMode::kCooperativePair;
  FsmStepOutput out;
  out.next = fsm;
  out.events.tag = fsm.tag;

  switch (fsm.tag) {
    case FsmTag::kWinning: {
      out.action = in.std_action;
      if (in.tip_draw) {
        out.next.tag = FsmTag::kTriggering;
        out.next.trigger_cursor = 0;
      }
      break;
    }
    case FsmTag::kTriggering: {
      const int cursor = fsm.trigger_cursor;
      out.action = trigger.actions[static_cast<std::size_t>(cursor)];
      out.events.trigger_started = cursor == 0;
      out.next.trigger_cursor = cursor + 1;
      if (cursor + 1 == trigger.size()) {
        out.events.trigger_completed = true;
        out.next.tag = FsmTag::kObserving;
        out.next.trigger_cursor = 0;
        out.next.observe_cursor = -1;  // sync step comes first
      }
      break;
    }
    case FsmTag::kObserving: {
      out.action = in.std_action;
      if (fsm.observe_cursor < 0) {
        // Sync step: the victim is answering the trigger right now; the
        // first inferable answer arrives next step.
        out.next.observe_cursor = 0;
        break;
      }
      if (!verdict_matches(in, backdoor, fsm.observe_cursor)) {
        if (cooperative) {
          out.next = reset_to_winning(fsm);
          out.next.tag = FsmTag::kPenalizing;
          out.events.rewarding_entered = true;
        } else {
          out.next = reset_to_winning(fsm);
        }
        break;
      }
      out.next.observe_cursor = fsm.observe_cursor + 1;
      if (out.next.observe_cursor == backdoor.size()) {
        // Full match observed. The g-th comparison runs one step after the
        // victim's last answer, so the completed timestep is step - 1.
        out.events.completion = true;
        out.next = reset_to_winning(out.next);
        out.next.completion_log.push_back(step - 1);
        if (!cooperative) {
          out.next.tag = FsmTag::kRewarding;
          out.events.rewarding_entered = true;
        }
      }
      break;
    }
    case FsmTag::kRewarding:
    case FsmTag::kPenalizing: {
      out.action = in.rwd_action;
      if (fsm.rewarding_steps == 0) {
        // The reward on the books was produced by the previous (Observing)
        // step's cover action; the first bribe/penalty outcome lands next
        // step.
        out.next.rewarding_steps = 1;
        break;
      }
      out.next.reward_accumulator +=
          std::pow(config.gamma, fsm.rewarding_steps - 1) *
          in.last_attacker_reward;
      out.next.rewarding_steps = fsm.rewarding_steps + 1;
      if (-out.next.reward_accumulator > config.brt) {
        out.next = reset_to_winning(out.next);
        out.events.rewarding_exited = true;
      }
      break;
    }
    case FsmTag::kNone:
      throw std::logic_error("fsm_step: kNone is not a machine state");
  }
  return out;
}

ScabAttackerPolicy::ScabAttackerPolicy(const MarkovGame& game,
                                       const forge::AttackerBundle& bundle,
                                       const forge::AttackConfig& config,
                                       std::uint64_t seed)
    : game_(&game),
      mode_(game.mode()),
      config_(config),
      detector_(bundle.detector),
      trigger_(bundle.trigger_seq),
      backdoor_(bundle.backdoor_seq),
      std_policy_(bundle.make_std_policy(game)),
      rwd_policy_(bundle.make_rwd_policy(game)),
      tip_rng_(seed, "scab/tip"),
      k_(bundle.detector.k()) {
  config_.validate();
  bundle.validate(game);
}

void ScabAttackerPolicy::begin_episode() {
  // Episode boundaries discard everything in flight: a cut-off trigger is
  // never counted and a live bribe resets (the machine re-enters Winning).
  fsm_ = FsmState{};
  events_ = StepEvents{};
  last_reward_ = 0.0;
  std_policy_->begin_episode();
  rwd_policy_->begin_episode();
}

Action ScabAttackerPolicy::act(ObsWindow window, RngStream& rng) {
  if (config_.tip == 0.0) {
    // Dormant machine: indistinguishable from the cover policy, trace
    // bytes included, so no draws and no events.
    events_ = StepEvents{};
    return std_policy_->act(window, rng);
  }

  FsmInputs in;
  switch (fsm_.tag) {
    case FsmTag::kWinning:
      ++tip_draws_;
      in.tip_draw = tip_rng_.bernoulli(config_.tip);
      if (in.tip_draw) ++tip_successes_;
      in.std_action = std_policy_->act(window, rng);
      break;
    case FsmTag::kTriggering:
      break;  // action comes from the trigger sequence
    case FsmTag::kObserving:
      in.std_action = std_policy_->act(window, rng);
      if (fsm_.observe_cursor >= 0) {
        if (window.size() >= static_cast<std::size_t>(k_)) {
          const auto verdict = detector_.detect(
              *game_, window.subspan(window.size() -
                                     static_cast<std::size_t>(k_)));
          in.detected_action = verdict.action;
          in.detect_confidence = verdict.confidence;
        }
        // else: window still too short for the detector; zero confidence
        // falls through as a mismatch.
      }
      break;
    case FsmTag::kRewarding:
    case FsmTag::kPenalizing:
      in.rwd_action = rwd_policy_->act(window, rng);
      in.last_attacker_reward = last_reward_;
      break;
    case FsmTag::kNone:
      throw std::logic_error("scab attacker: invalid machine state");
  }

  auto out = fsm_step(fsm_, in, trigger_, backdoor_, config_, mode_,
                      window.back().step);
  fsm_ = std::move(out.next);
  events_ = out.events;
  if (events_.trigger_completed) ++triggers_completed_;
  if (events_.completion) ++completions_;
  return out.action;
}

}  // namespace scablab::attack
