// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCABLAB_FORGE_REWARDING_HPP_
#define SCABLAB_FORGE_REWARDING_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "scablab/learn/learners.hpp"

namespace scablab::forge {

struct RewardingConfig {
  int n_opponents = 10;                   // alternating victim proxies
  std::int64_t alternation_period = 1000; // attacker steps per proxy block
  std::int64_t total_steps = 50000;       // attacker learner budget
  void validate() const;
};

struct RewardingResult {
  std::string checkpoint;
  // Attacker loss sampled at each alternation block boundary. There is no
  // convergence criterion for the max-min approximation, only a fixed
  // budget; this trail is the plateau report.
  std::vector<double> loss_trail;
};

// Trains the policy the attacker switches to when it wants the *victim* to
// score: the attacker seat is paid the victim's reward (equivalently
// -own under the zero-sum property), while a rotating population of victim
// proxies is paid to refuse the gift. Every episode warm-starts from a
// random rollout prefix, so arbitrary states get covered.
// `fixed_seats` supplies policies for any seats beyond the attacker/victim
// pair (empty for two-role games); those seats never learn.
RewardingResult train_rewarding_policy(const MarkovGame& game,
                                       int attacker_role, int victim_role,
                                       const learn::LearnerConfig& attacker_cfg,
                                       const learn::LearnerConfig& proxy_cfg,
                                       const RewardingConfig& rcfg,
                                       std::uint64_t seed,
                                       const std::vector<Policy*>& fixed_seats = {});

// Cooperative analog: the attacker learns to sink the shared team return
// while the victim proxy plays the game straight. Requires a cooperative
// game; the bundle records which flavor it carries.
RewardingResult train_penalizing_policy(const MarkovGame& game,
                                        int attacker_role, int victim_role,
                                        const learn::LearnerConfig& attacker_cfg,
                                        const learn::LearnerConfig& proxy_cfg,
                                        const RewardingConfig& rcfg,
                                        std::uint64_t seed,
                                        const std::vector<Policy*>& fixed_seats = {});

}  // namespace scablab::forge

#endif  // SCABLAB_FORGE_REWARDING_HPP_
