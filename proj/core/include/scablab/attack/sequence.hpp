// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCABLAB_ATTACK_SEQUENCE_HPP_
#define SCABLAB_ATTACK_SEQUENCE_HPP_

#include <span>
#include <string>
#include <vector>

#include "scablab/action.hpp"

namespace scablab::attack {

// Ordered action list: the trigger the attacker performs (length h) or the
// backdoor the victim is taught to answer with (length g). Continuous
// sequences carry the sup-norm tolerance used when an observed action is
// compared against its target; discrete sequences compare exactly.
struct ActionSequence {
  std::vector<Action> actions;
  double tolerance = 0.0;

  int size() const { return static_cast<int>(actions.size()); }
  bool continuous() const {
    return !actions.empty() && actions.front().is_continuous();
  }
  // Nonempty, uniform kind, every element inside `space`, and the
  // tolerance rule for the kind (discrete: 0, continuous: > 0).
  void validate(const ActionSpace& space) const;
};

// Prefix comparison of inferred victim actions against the backdoor target.
// Kind mismatches are a caller bug and throw; a clean miss reports the first
// offending index instead.
struct CompletionCheck {
  bool matched = true;
  int mismatch_index = -1;
};
CompletionCheck check_completion(std::span<const Action> inferred,
                                 const ActionSequence& backdoor);

// Manifest round-trip.
std::string sequence_to_json(const ActionSequence& seq);
ActionSequence sequence_from_json(const std::string& text);

}  // namespace scablab::attack

#endif  // SCABLAB_ATTACK_SEQUENCE_HPP_
