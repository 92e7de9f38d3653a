// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#include "fsm_oracle.hpp"

#include <cmath>

namespace scablab::testing {
namespace {

enum : int {
  kWinning = 1,
  kTriggering = 2,
  kObserving = 3,
  kRewarding = 4,
  kPenalizing = 5,
};

}  // namespace

// Walks the timeline phase by phase. Every `emit` appends exactly one step;
// the walk stops the moment num_steps records exist.
FsmRun run_fsm_oracle(const FsmScript& s) {
  FsmRun run;
  std::size_t cursor = 0;
  const auto consume = [&]() -> int {
    if (cursor >= s.decisions.size()) return 0;
    return s.decisions[cursor++];
  };
  const auto full = [&] {
    return static_cast<int>(run.steps.size()) >= s.num_steps;
  };
  const auto emit = [&](FsmRecord rec) { run.steps.push_back(rec); };

  while (!full()) {
    // --- Winning: flip the injection coin each step, cover action either
    // way; heads means the trigger starts on the NEXT step.
    bool fired = false;
    while (!full() && !fired) {
      fired = consume() % 2 == 1;
      emit({kWinning, 0});
    }
    if (full()) break;

    // --- Triggering: exactly h steps emitting the trigger elements.
    for (int c = 0; c < s.h && !full(); ++c) {
      FsmRecord rec{kTriggering, kOracleTriggerBase[c]};
      rec.trigger_started = c == 0;
      rec.trigger_completed = c == s.h - 1;
      emit(rec);
    }
    if (full()) break;

    // --- Observing, sync step: the victim is answering right now; nothing
    // to compare yet.
    emit({kObserving, 0});
    if (full()) break;

    // --- Observing, comparison steps: up to g verdicts, one per step.
    int matches = 0;
    bool mismatched = false;
    while (matches < s.g && !full()) {
      const int d = consume();
      const bool match = d == 0;  // 1 = wrong action, 2 = uncertain
      FsmRecord rec{kObserving, 0};
      if (match) {
        ++matches;
        if (matches == s.g) {
          rec.completion = true;
          if (!s.cooperative) rec.rewarding_entered = true;
          emit(rec);
          // The g-th verdict lands one step after the victim's last answer.
          run.completion_log.push_back(
              static_cast<int>(run.steps.size()) - 2);
          break;
        }
        emit(rec);
      } else {
        mismatched = true;
        if (s.cooperative) rec.rewarding_entered = true;
        emit(rec);
        break;
      }
    }
    if (full()) break;

    // Competitive: bribe after a full match. Cooperative: punish after a
    // broken one. Everything else goes straight back to Winning.
    const bool bribe = !s.cooperative && matches == s.g;
    const bool punish = s.cooperative && mismatched;
    if (!bribe && !punish) continue;
    const int tag = bribe ? kRewarding : kPenalizing;

    // First paid step: the reward on the books is from the cover action
    // one step earlier, so it is skipped.
    emit({tag, 1});
    double acc = 0.0;
    int paid = 0;
    while (!full()) {
      const int d = consume();
      acc += std::pow(s.gamma, paid) * (d % 2 == 0 ? -1.0 : 0.5);
      ++paid;
      FsmRecord rec{tag, 1};
      rec.rewarding_exited = -acc > s.brt;
      emit(rec);
      if (rec.rewarding_exited) break;
    }
  }
  return run;
}

}  // namespace scablab::testing
