// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#include "scablab/learn/value_iteration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scablab/learn/learners.hpp"

namespace scablab::learn {

void MicroMdp::validate() const {
  if (num_states < 1 || num_actions < 1) {
    throw std::invalid_argument("micro mdp: empty state or action set");
  }
  if (start < 0 || start >= num_states) {
    throw std::invalid_argument("micro mdp: start out of range");
  }
  const auto n = static_cast<std::size_t>(num_states) *
                 static_cast<std::size_t>(num_actions);
  if (next.size() != n || reward.size() != n || done.size() != n) {
    throw std::invalid_argument("micro mdp: table size mismatch");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!done[i] && (next[i] < 0 || next[i] >= num_states)) {
      throw std::invalid_argument("micro mdp: next state out of range");
    }
    if (!std::isfinite(reward[i])) {
      throw std::invalid_argument("micro mdp: non-finite reward");
    }
  }
}

std::vector<double> value_iteration(const MicroMdp& mdp, double gamma,
                                    double tol, int max_iters) {
  mdp.validate();
  if (gamma < 0.0 || gamma >= 1.0) {
    throw std::invalid_argument("value_iteration: gamma outside [0, 1)");
  }
  if (tol <= 0.0) throw std::invalid_argument("value_iteration: bad tol");
  const auto n = static_cast<std::size_t>(mdp.num_states) *
                 static_cast<std::size_t>(mdp.num_actions);
  std::vector<double> q(n, 0.0);
  std::vector<double> next_q(n, 0.0);
  for (int iter = 0; iter < max_iters; ++iter) {
    double delta = 0.0;
    for (int s = 0; s < mdp.num_states; ++s) {
      for (int a = 0; a < mdp.num_actions; ++a) {
        const auto i = mdp.idx(s, a);
        double v = mdp.reward[i];
        if (!mdp.done[i]) {
          const int ns = mdp.next[i];
          double best = q[mdp.idx(ns, 0)];
          for (int b = 1; b < mdp.num_actions; ++b) {
            best = std::max(best, q[mdp.idx(ns, b)]);
          }
          v += gamma * best;
        }
        next_q[i] = v;
        delta = std::max(delta, std::abs(v - q[i]));
      }
    }
    q.swap(next_q);
    if (delta < tol) return q;
  }
  throw std::runtime_error("value_iteration: did not converge");
}

QTable train_tabular_on_micro(const MicroMdp& mdp, double gamma, double alpha,
                              double eps, int episodes, int episode_cap,
                              std::uint64_t seed) {
  mdp.validate();
  QTable table(mdp.num_actions);
  RngStream rng(seed, "micro/train");
  for (int ep = 0; ep < episodes; ++ep) {
    int s = mdp.start;
    for (int t = 0; t < episode_cap; ++t) {
      const auto row = table.row(static_cast<std::uint64_t>(s));
      const int a = select_epsilon_greedy(row, eps, true, rng);
      const auto i = mdp.idx(s, a);
      const bool done = mdp.done[i] != 0;
      const int ns = done ? s : mdp.next[i];
      q_update(table, static_cast<std::uint64_t>(s), a, mdp.reward[i],
               static_cast<std::uint64_t>(ns), done, alpha, gamma);
      if (done) break;
      s = ns;
    }
  }
  return table;
}

MicroMdp micro_single_state() {
  MicroMdp m;
  m.num_states = 1;
  m.num_actions = 2;
  m.start = 0;
  m.next = {0, 0};
  m.reward = {1.0, 0.0};  // stay, quit
  m.done = {0, 1};
  return m;
}

MicroMdp micro_two_state_chain() {
  MicroMdp m;
  m.num_states = 2;
  m.num_actions = 2;
  m.start = 0;
  // action 0 walks right (paid on leaving s1), action 1 walks back to s0.
  m.next = {1, 0, /*s1:*/ 0, 0};
  m.reward = {0.0, 0.0, 1.0, 0.0};
  m.done = {0, 0, 1, 0};
  return m;
}

MicroMdp micro_risky_shortcut() {
  MicroMdp m;
  m.num_states = 3;
  m.num_actions = 2;
  m.start = 0;
  // Corridor s0 -> s1 -> s2 -> goal (r=1). The shortcut at s0 cashes out
  // 0.5 immediately, so the optimal action at s0 flips with gamma.
  m.next = {1, 0, /*s1:*/ 2, 0, /*s2:*/ 0, 1};
  m.reward = {0.0, 0.5, 0.0, 0.0, 1.0, -0.2};
  m.done = {0, 1, 0, 0, 1, 0};
  return m;
}

}  // namespace scablab::learn
