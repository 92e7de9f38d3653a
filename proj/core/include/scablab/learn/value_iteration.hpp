// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCABLAB_LEARN_VALUE_ITERATION_HPP_
#define SCABLAB_LEARN_VALUE_ITERATION_HPP_

#include <cstdint>
#include <vector>

#include "scablab/learn/qtable.hpp"

namespace scablab::learn {

// Tiny deterministic MDP spelled out as explicit tables. These act as
// ground truth for the tabular learner: value_iteration solves them exactly
// and Q-learning must reach the same fixed point.
struct MicroMdp {
  int num_states = 1;
  int num_actions = 1;
  int start = 0;
  // Row-major [state][action].
  std::vector<int> next;
  std::vector<double> reward;
  std::vector<std::uint8_t> done;  // 1 ends the episode; next is ignored

  std::size_t idx(int s, int a) const {
    return static_cast<std::size_t>(s) * static_cast<std::size_t>(num_actions) +
           static_cast<std::size_t>(a);
  }
  void validate() const;
};

// Exact Q* by Bellman backups to a sup-norm fixed point. Returns row-major
// Q[state][action]. Throws on bad gamma or if max_iters sweeps don't reach
// tol.
std::vector<double> value_iteration(const MicroMdp& mdp, double gamma,
                                    double tol = 1e-12,
                                    int max_iters = 1000000);

// Epsilon-greedy Q-learning run directly on the explicit tables, keyed by
// state index. The learner tests compare the result against
// value_iteration in sup-norm.
QTable train_tabular_on_micro(const MicroMdp& mdp, double gamma, double alpha,
                              double eps, int episodes, int episode_cap,
                              std::uint64_t seed);

// Shared fixtures. Hand-solvable closed forms live in the tests.
MicroMdp micro_single_state();    // stay (r=1, loops) vs quit (r=0, ends)
MicroMdp micro_two_state_chain(); // walk right, paid on leaving the end
MicroMdp micro_risky_shortcut();  // corridor where the shortcut's penalty
                                  // flips the optimal action by gamma

}  // namespace scablab::learn

#endif  // SCABLAB_LEARN_VALUE_ITERATION_HPP_
