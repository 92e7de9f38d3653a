// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#include "scablab/exploit/compose.hpp"

#include <stdexcept>

namespace scablab::exploit {

ComposedExploitPolicy::ComposedExploitPolicy(const MarkovGame& game,
                                             int op_role, Policy* op_policy,
                                             const TriggerNetwork* net,
                                             attack::ActionSequence trigger)
    : game_(&game),
      op_role_(op_role),
      op_(op_policy),
      net_(net),
      trigger_(std::move(trigger)) {
  if (op_ == nullptr || net_ == nullptr) {
    throw std::invalid_argument("compose: null opponent policy or net");
  }
  trigger_.validate(game.action_space(op_role));
}

void ComposedExploitPolicy::begin_episode() {
  cursor_ = -1;
  events_ = {};
  op_->begin_episode();
}

Action ComposedExploitPolicy::act(ObsWindow window, RngStream& rng) {
  events_ = {};
  if (cursor_ < 0) {
    if (net_->fire(*game_, op_role_, window)) {
      ++fires_;
      events_.tag = FsmTag::kTriggering;
      events_.trigger_started = true;
      if (trigger_.size() == 1) {
        events_.trigger_completed = true;
        cursor_ = -1;
      } else {
        cursor_ = 1;
      }
      return trigger_.actions.front();
    }
    events_.tag = FsmTag::kWinning;
    return op_->act(window, rng);
  }
  // Mid-sequence: the net is not consulted, so no re-trigger can start.
  const Action a = trigger_.actions[static_cast<std::size_t>(cursor_)];
  events_.tag = FsmTag::kTriggering;
  if (++cursor_ == trigger_.size()) {
    events_.trigger_completed = true;
    cursor_ = -1;
  }
  return a;
}

SingleInjectionPolicy::SingleInjectionPolicy(Policy* op_policy,
                                             attack::ActionSequence trigger,
                                             int fire_step)
    : op_(op_policy), trigger_(std::move(trigger)), fire_step_(fire_step) {
  if (op_ == nullptr) throw std::invalid_argument("injection: null policy");
  if (trigger_.actions.empty()) {
    throw std::invalid_argument("injection: empty trigger");
  }
  if (fire_step_ < 0) throw std::invalid_argument("injection: negative step");
}

void SingleInjectionPolicy::begin_episode() {
  step_ = 0;
  events_ = {};
  op_->begin_episode();
}

Action SingleInjectionPolicy::act(ObsWindow window, RngStream& rng) {
  events_ = {};
  const int offset = step_ - fire_step_;
  ++step_;
  if (offset >= 0 && offset < trigger_.size()) {
    events_.tag = FsmTag::kTriggering;
    events_.trigger_started = offset == 0;
    events_.trigger_completed = offset == trigger_.size() - 1;
    return trigger_.actions[static_cast<std::size_t>(offset)];
  }
  events_.tag = FsmTag::kWinning;
  return op_->act(window, rng);
}

ProportionInjectionPolicy::ProportionInjectionPolicy(
    Policy* op_policy, attack::ActionSequence trigger, double proportion)
    : op_(op_policy), trigger_(std::move(trigger)), proportion_(proportion) {
  if (op_ == nullptr) throw std::invalid_argument("injection: null policy");
  if (trigger_.actions.empty()) {
    throw std::invalid_argument("injection: empty trigger");
  }
  const double h = static_cast<double>(trigger_.size());
  if (proportion_ < 0.0 || proportion_ > h / (h + 1.0) + 1e-12) {
    throw std::invalid_argument(
        "injection: proportion outside [0, h/(h+1)] is unreachable");
  }
}

void ProportionInjectionPolicy::begin_episode() {
  cursor_ = -1;  // a cut-off burst is abandoned; the accumulator carries
  events_ = {};
  op_->begin_episode();
}

Action ProportionInjectionPolicy::act(ObsWindow window, RngStream& rng) {
  events_ = {};
  ++total_steps_;
  acc_ += proportion_;
  if (cursor_ >= 0) {
    ++trigger_steps_;
    const Action a = trigger_.actions[static_cast<std::size_t>(cursor_)];
    events_.tag = FsmTag::kTriggering;
    events_.trigger_started = cursor_ == 0;
    if (++cursor_ == trigger_.size()) {
      events_.trigger_completed = true;
      cursor_ = -1;
    }
    return a;
  }
  events_.tag = FsmTag::kWinning;
  if (acc_ >= static_cast<double>(trigger_.size())) {
    acc_ -= static_cast<double>(trigger_.size());
    cursor_ = 0;  // burst begins next step; this step still plays cover
  }
  return op_->act(window, rng);
}

}  // namespace scablab::exploit
