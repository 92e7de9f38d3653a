// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#include "scablab/attack/target_policy.hpp"

namespace scablab::attack {

Action backdoor_target_action(int t, int window_start,
                              const ActionSequence& backdoor,
                              const Action& fallback) {
  if (t >= window_start && t < window_start + backdoor.size()) {
    return backdoor.actions[static_cast<std::size_t>(t - window_start)];
  }
  return fallback;
}

}  // namespace scablab::attack
