// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#include "scablab/analysis/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace scablab::analysis {

RateReport success_rate(const std::vector<bool>& outcomes) {
  RateReport out;
  out.injections = static_cast<int>(outcomes.size());
  for (bool b : outcomes) out.successes += b ? 1 : 0;
  if (out.injections == 0) return out;  // undefined marker
  out.defined = true;
  out.ci = wilson_interval(out.successes, out.injections);
  return out;
}

Interval average_episodic_return(std::span<const EpisodeTrace> traces,
                                 int role) {
  if (traces.empty()) {
    throw std::invalid_argument("metrics: need at least one trace");
  }
  std::vector<double> returns;
  returns.reserve(traces.size());
  for (const auto& t : traces) {
    returns.push_back(t.return_raw.at(static_cast<std::size_t>(role)));
  }
  return t_interval(returns);
}

double return_drop_ratio(double baseline, double degraded) {
  if (baseline == 0.0) {
    throw std::invalid_argument("metrics: zero baseline return");
  }
  return (baseline - degraded) / std::fabs(baseline);
}

std::vector<double> action_distribution(const MarkovGame& game,
                                        std::span<const EpisodeTrace> traces,
                                        int role) {
  const ActionSpace space = game.action_space(role);
  std::vector<double> counts;
  double total = 0.0;

  if (space.kind == ActionSpace::Kind::kDiscrete) {
    counts.assign(static_cast<std::size_t>(space.size()), 0.0);
    for (const auto& t : traces) {
      for (const auto& step : t.steps) {
        counts[static_cast<std::size_t>(
            step.actions.at(static_cast<std::size_t>(role)).discrete)] += 1.0;
        total += 1.0;
      }
    }
  } else {
    std::size_t cells = 1;
    for (int d = 0; d < space.dim; ++d) cells *= kContinuousBins;
    counts.assign(cells, 0.0);
    const double width = (space.high - space.low) / kContinuousBins;
    for (const auto& t : traces) {
      for (const auto& step : t.steps) {
        const auto& box =
            step.actions.at(static_cast<std::size_t>(role)).box;
        std::size_t cell = 0;
        for (int d = 0; d < space.dim; ++d) {
          int bin = static_cast<int>(
              (box.at(static_cast<std::size_t>(d)) - space.low) / width);
          bin = std::min(std::max(bin, 0), kContinuousBins - 1);
          cell = cell * kContinuousBins + static_cast<std::size_t>(bin);
        }
        counts[cell] += 1.0;
        total += 1.0;
      }
    }
  }

  if (total == 0.0) {
    throw std::invalid_argument("metrics: no actions to tabulate");
  }
  for (double& c : counts) c /= total;
  return counts;
}

double spontaneous_backdoor_rate(std::span<const EpisodeTrace> traces,
                                 int role,
                                 const attack::ActionSequence& backdoor) {
  const int g = backdoor.size();
  if (g == 0) throw std::invalid_argument("metrics: empty backdoor sequence");
  long long windows = 0;
  long long matches = 0;
  for (const auto& t : traces) {
    const int len = static_cast<int>(t.steps.size());
    for (int i = 0; i + g <= len; ++i) {
      ++windows;
      bool all = true;
      for (int c = 0; c < g; ++c) {
        const auto& got = t.steps[static_cast<std::size_t>(i + c)]
                              .actions.at(static_cast<std::size_t>(role));
        if (!actions_match(got,
                           backdoor.actions[static_cast<std::size_t>(c)],
                           backdoor.tolerance)) {
          all = false;
          break;
        }
      }
      if (all) ++matches;
    }
  }
  if (windows == 0) return 0.0;
  return static_cast<double>(matches) / static_cast<double>(windows);
}

void RunSummary::validate() const {
  if (returns.empty() || returns.size() != lengths.size() ||
      returns.size() != losses.size()) {
    throw std::invalid_argument(
        "metrics: run summary needs equal-length nonempty metric columns");
  }
}

StealthReport stealth_report(const RunSummary& clean,
                             const RunSummary& attacked, double alpha) {
  clean.validate();
  attacked.validate();
  if (clean.returns.size() != attacked.returns.size()) {
    throw std::invalid_argument(
        "metrics: stealth comparison needs equal-length runs");
  }

  StealthReport out;
  out.alpha = alpha;
  const struct {
    const char* name;
    const std::vector<double>& a;
    const std::vector<double>& b;
  } columns[] = {{"return", clean.returns, attacked.returns},
                 {"length", clean.lengths, attacked.lengths},
                 {"loss", clean.losses, attacked.losses}};
  out.indistinguishable = true;
  for (const auto& col : columns) {
    MetricComparison cmp;
    cmp.name = col.name;
    cmp.clean = t_interval(col.a);
    cmp.attacked = t_interval(col.b);
    cmp.p_value = welch_t_test(col.a, col.b).p_value;
    if (cmp.p_value < alpha) out.indistinguishable = false;
    out.metrics.push_back(cmp);
  }
  return out;
}

}  // namespace scablab::analysis
