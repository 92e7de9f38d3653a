// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCABLAB_ANALYSIS_METRICS_HPP_
#define SCABLAB_ANALYSIS_METRICS_HPP_

#include <span>
#include <string>
#include <vector>

#include "scablab/analysis/stats.hpp"
#include "scablab/attack/sequence.hpp"
#include "scablab/game.hpp"
#include "scablab/trace.hpp"

namespace scablab::analysis {

// Success rate over injection outcomes with a Wilson 95% interval. Zero
// injections is an undefined rate, not zero: `defined` distinguishes the
// two so a report can never silently launder "no data" into "no success".
struct RateReport {
  bool defined = false;
  int successes = 0;
  int injections = 0;
  Interval ci;  // meaningful only when defined
};
RateReport success_rate(const std::vector<bool>& outcomes);

// Sample mean of per-episode raw returns with a t-interval.
Interval average_episodic_return(std::span<const EpisodeTrace> traces,
                                 int role);

// Fractional return degradation: (baseline - degraded) / |baseline|.
double return_drop_ratio(double baseline, double degraded);

// Per-action frequencies for `role`, summing to 1. Discrete games index by
// action; continuous games bin each dimension into `kContinuousBins` equal
// cells and index the flattened joint grid, which is all Table-style action
// histograms need at this scale.
inline constexpr int kContinuousBins = 5;
std::vector<double> action_distribution(const MarkovGame& game,
                                        std::span<const EpisodeTrace> traces,
                                        int role);

// Fraction of stride-1 windows of `role`'s action stream equal to the
// backdoor sequence (tolerance-aware). Windows never span episodes.
double spontaneous_backdoor_rate(std::span<const EpisodeTrace> traces,
                                 int role,
                                 const attack::ActionSequence& backdoor);

// One training run's bulk metrics, one entry per episode. Episode lengths
// come from traces at collection time; the persisted training log keeps its
// pinned schema.
struct RunSummary {
  std::vector<double> returns;
  std::vector<double> lengths;
  std::vector<double> losses;

  void validate() const;  // equal, nonzero sizes
};

struct MetricComparison {
  std::string name;
  Interval clean;
  Interval attacked;
  double p_value = 1.0;
};

// Side-by-side bulk metrics with Welch's test per metric. The runs must
// have the same episode count; `indistinguishable` iff every test is
// non-significant at alpha.
struct StealthReport {
  std::vector<MetricComparison> metrics;
  double alpha = 0.05;
  bool indistinguishable = false;
};
StealthReport stealth_report(const RunSummary& clean,
                             const RunSummary& attacked, double alpha = 0.05);

}  // namespace scablab::analysis

#endif  // SCABLAB_ANALYSIS_METRICS_HPP_
