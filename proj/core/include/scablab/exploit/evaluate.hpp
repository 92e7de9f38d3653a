// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCABLAB_EXPLOIT_EVALUATE_HPP_
#define SCABLAB_EXPLOIT_EVALUATE_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "scablab/analysis/stats.hpp"
#include "scablab/attack/sequence.hpp"
#include "scablab/forge/bundle.hpp"
#include "scablab/game.hpp"
#include "scablab/policy.hpp"
#include "scablab/trace.hpp"

namespace scablab::exploit {

struct ExploitConfig {
  double penalty = 1.0;
  std::vector<double> proportion_targets = {0.0, 0.05, 0.10, 0.20, 0.30};
  int eval_episodes = 1000;

  void validate() const;  // penalty >= 0, targets in [0,1]
};

// Realized value of the exploitation objective on one trace: the opponent
// seat's discounted return minus `penalty` per fire (trigger initiation).
double exploit_objective_value(const EpisodeTrace& trace, double penalty,
                               double gamma, int op_role = 1);

// Seat wiring shared by the evaluation drivers. Team games must supply a
// policy for every seat outside the victim/opponent pair.
struct EvalSeats {
  int victim_role = 0;
  int op_role = 1;
  std::vector<Policy*> fixed_seats;
};

struct TriggerSuccessResult {
  int injections = 0;
  int successes = 0;
  int exclusions = 0;  // episodes that ended before the answer window
  std::vector<bool> outcomes;

  double rate() const {
    return injections == 0
               ? 0.0
               : static_cast<double>(successes) / static_cast<double>(injections);
  }
};

struct TriggerSuccessOptions {
  EvalSeats seats;
  // Invoked before each episode with the first answer-window step; lets the
  // analytic compliance oracle know where its window starts. Learned victims
  // get no such courtesy.
  std::function<void(int first_answer_step)> announce;
};

// One injection per episode at a uniformly random eligible step (eligible:
// the full trigger plus answer window fits under the step cap). Success is
// the victim answering the complete backdoor sequence, judged on the raw
// trace with the sequence's tolerance. Episodes that terminate before the
// answer window resolves are excluded, not failed.
TriggerSuccessResult evaluate_trigger_success(
    const MarkovGame& game, Policy& victim, const forge::AttackerBundle& bundle,
    int n_episodes, std::uint64_t seed, const TriggerSuccessOptions& opts = {});

struct ProportionRow {
  double target = 0.0;
  double realized = 0.0;  // pooled trigger-step fraction across episodes
  int n = 0;
  analysis::Interval victim_return;  // mean with 95% CI
};

// Victim return as the injected trigger-step fraction sweeps the targets.
// Targets must be sorted ascending, each within [0, h/(h+1)].
std::vector<ProportionRow> evaluate_return_vs_proportion(
    const MarkovGame& game, Policy& victim, const forge::AttackerBundle& bundle,
    std::vector<double> proportions, int n_episodes, std::uint64_t seed,
    const EvalSeats& seats = {});

// One line of the evaluation report.
struct ExploitReportRow {
  std::string game;
  std::string victim_id;
  double tip = 0.0;
  double proportion = 0.0;
  int n = 0;
  double mean_return = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double trigger_success_rate = 0.0;
  double spontaneous_rate = 0.0;
  int exclusions = 0;
};

// Deterministic CSV (fixed header, %.10g floats) so identical runs produce
// identical bytes.
std::string exploit_report_csv(const std::vector<ExploitReportRow>& rows);

}  // namespace scablab::exploit

#endif  // SCABLAB_EXPLOIT_EVALUATE_HPP_
