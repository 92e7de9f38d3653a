// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCABLAB_EXPLOIT_TRIGGER_NET_HPP_
#define SCABLAB_EXPLOIT_TRIGGER_NET_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "scablab/attack/sequence.hpp"
#include "scablab/game.hpp"
#include "scablab/learn/small_net.hpp"
#include "scablab/policy.hpp"

namespace scablab::exploit {

// Learned firing rule for test-time exploitation: a scalar map over the
// exploiting seat's recent observations, thresholded at zero. Evaluation is
// deterministic; all sampling lives in the trainer.
class TriggerNetwork {
 public:
  TriggerNetwork() = default;

  // Positive means fire. The score is the fire-vs-hold logit margin of a
  // two-headed net over the last `window()` frames (older frames padded by
  // repetition, matching the stack featurizer).
  double score(const MarkovGame& game, int op_role, ObsWindow window) const;
  bool fire(const MarkovGame& game, int op_role, ObsWindow window) const {
    return score(game, op_role, window) > 0.0;
  }

  int window() const { return window_; }

  std::string to_json() const;
  static TriggerNetwork from_json(const std::string& text);

 private:
  friend TriggerNetwork train_trigger_network(
      const MarkovGame& game, const std::string& victim_checkpoint,
      Policy& op_policy, const attack::ActionSequence& trigger,
      const struct TriggerNetTrainConfig& config, std::int64_t total_steps,
      std::uint64_t seed);

  int window_ = 1;
  learn::SmallNet net_;  // outputs {hold, fire} logits
};

struct TriggerNetTrainConfig {
  double penalty = 1.0;    // p: charged once per fire decision
  double gamma = 0.99;     // discount for the decision returns
  double alpha = 0.05;     // SGD step size
  int window = 1;          // observation frames fed to the net
  std::vector<int> hidden = {16};

  void validate() const;
};

// REINFORCE with a per-episode mean baseline on the reward stream
//   r~(i) = r_op(i) - penalty * [fired at i],
// rolling out the two-state composition against the thawed victim snapshot.
// Taking the victim as a checkpoint (not a live policy) is what enforces the
// test-time contract: only frozen, greedy snapshots can be evaluated here.
TriggerNetwork train_trigger_network(const MarkovGame& game,
                                     const std::string& victim_checkpoint,
                                     Policy& op_policy,
                                     const attack::ActionSequence& trigger,
                                     const TriggerNetTrainConfig& config,
                                     std::int64_t total_steps,
                                     std::uint64_t seed);

}  // namespace scablab::exploit

#endif  // SCABLAB_EXPLOIT_TRIGGER_NET_HPP_
