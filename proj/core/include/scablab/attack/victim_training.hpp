// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCABLAB_ATTACK_VICTIM_TRAINING_HPP_
#define SCABLAB_ATTACK_VICTIM_TRAINING_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "scablab/attack/fsm.hpp"
#include "scablab/episode.hpp"
#include "scablab/learn/learners.hpp"

namespace scablab::attack {

struct TrainingRecord {
  int episode = 0;
  double return_vic = 0.0;
  double return_att = 0.0;
  double loss = 0.0;
  int triggers_injected = 0;  // completed trigger emissions this episode
  int completions = 0;        // verified backdoor answers this episode
  int rewarding_steps = 0;    // steps acted under Rewarding/Penalizing
};

// Realized trigger-injection accounting: Bernoulli draws happen only on
// Winning steps, so the realized fraction differs from the configured tip
// whenever the machine spends time in the other states.
struct TipReport {
  std::int64_t draws = 0;
  std::int64_t successes = 0;
  std::int64_t completed = 0;  // triggers fully emitted (cut-offs excluded)
  double realized() const {
    return draws == 0 ? 0.0 : static_cast<double>(completed) /
                                  static_cast<double>(draws);
  }
};

struct TrainingLog {
  std::vector<TrainingRecord> records;
  TipReport tip;

  // One JSON object per line, one line per episode; the tip report is a
  // separate artifact and is not part of the stream.
  std::string to_jsonl() const;
  static TrainingLog from_jsonl(const std::string& text);
};

struct VictimTrainOptions {
  // Policies for seats outside the victim/attacker pair (team games).
  std::vector<Policy*> fixed_seats;
  // Called with every finished episode's trace, e.g. to pin byte-level
  // equality between poisoned and clean runs.
  std::function<void(int episode, const EpisodeTrace&)> on_episode;
};

struct VictimTrainResult {
  std::string victim_checkpoint;
  TrainingLog log;
};

// Trains the victim with its ordinary learning loop while the attacker seat
// runs the four-state machine. The victim's learner is never touched: the
// poison flows only through the attacker's (legitimate) actions and the
// environment's own rewards. Runs whole episodes until the victim has seen
// at least total_steps transitions.
VictimTrainResult train_victim_with_scab(const MarkovGame& game,
                                         const learn::LearnerConfig& victim_cfg,
                                         const forge::AttackerBundle& bundle,
                                         const forge::AttackConfig& attack_cfg,
                                         std::int64_t total_steps,
                                         std::uint64_t seed,
                                         const VictimTrainOptions& opts = {});

// The same loop with the bare cover policy in the attacker seat — the
// baseline a tip=0 poisoned run must match byte for byte.
VictimTrainResult train_victim_clean(const MarkovGame& game,
                                     const learn::LearnerConfig& victim_cfg,
                                     const forge::AttackerBundle& bundle,
                                     std::int64_t total_steps,
                                     std::uint64_t seed,
                                     const VictimTrainOptions& opts = {});

}  // namespace scablab::attack

#endif  // SCABLAB_ATTACK_VICTIM_TRAINING_HPP_
