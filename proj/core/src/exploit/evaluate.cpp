// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#include "scablab/exploit/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "scablab/episode.hpp"
#include "scablab/exploit/compose.hpp"

namespace scablab::exploit {
namespace {

std::vector<Policy*> wire_seats(const MarkovGame& game, Policy& victim,
                                Policy& op, const EvalSeats& seats) {
  const int n = game.num_roles();
  if (n > 2 && static_cast<int>(seats.fixed_seats.size()) != n) {
    throw std::invalid_argument(
        "exploit: games with extra seats need a fixed policy per seat");
  }
  std::vector<Policy*> out(static_cast<std::size_t>(n), nullptr);
  for (int r = 0; r < n; ++r) {
    if (r == seats.victim_role) {
      out[static_cast<std::size_t>(r)] = &victim;
    } else if (r == seats.op_role) {
      out[static_cast<std::size_t>(r)] = &op;
    } else {
      out[static_cast<std::size_t>(r)] =
          seats.fixed_seats[static_cast<std::size_t>(r)];
      if (out[static_cast<std::size_t>(r)] == nullptr) {
        throw std::invalid_argument("exploit: missing fixed policy for seat " +
                                    std::to_string(r));
      }
    }
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

void ExploitConfig::validate() const {
  if (penalty < 0.0) throw std::invalid_argument("exploit: penalty < 0");
  if (eval_episodes <= 0) {
    throw std::invalid_argument("exploit: eval_episodes must be positive");
  }
  for (double t : proportion_targets) {
    if (t < 0.0 || t > 1.0) {
      throw std::invalid_argument("exploit: proportion outside [0,1]");
    }
  }
}

double exploit_objective_value(const EpisodeTrace& trace, double penalty,
                               double gamma, int op_role) {
  if (gamma <= 0.0 || gamma > 1.0) {
    throw std::invalid_argument("exploit: gamma must lie in (0,1]");
  }
  double value = 0.0;
  double weight = 1.0;
  long long fires = 0;
  for (const auto& step : trace.steps) {
    value += weight * step.rewards.at(static_cast<std::size_t>(op_role));
    weight *= gamma;
    fires += step.events.trigger_started ? 1 : 0;
  }
  return value - penalty * static_cast<double>(fires);
}

TriggerSuccessResult evaluate_trigger_success(const MarkovGame& game,
                                              Policy& victim,
                                              const forge::AttackerBundle& bundle,
                                              int n_episodes,
                                              std::uint64_t seed,
                                              const TriggerSuccessOptions& opts) {
  if (n_episodes <= 0) {
    throw std::invalid_argument("exploit: n_episodes must be positive");
  }
  bundle.validate(game);
  const int h = bundle.trigger_seq.size();
  const int g = bundle.backdoor_seq.size();
  const int cap = game.step_cap();
  if (cap < h + g) {
    throw std::invalid_argument(
        "exploit: step cap cannot fit trigger plus answer window");
  }
  const auto cover = bundle.make_std_policy(game);

  TriggerSuccessResult result;
  for (int e = 0; e < n_episodes; ++e) {
    RngStream pick(seed, "exploit/inject", static_cast<std::uint64_t>(e));
    const int fire_step =
        static_cast<int>(pick.next_below(static_cast<std::uint64_t>(
            cap - h - g + 1)));
    SingleInjectionPolicy op(cover.get(), bundle.trigger_seq, fire_step);
    if (opts.announce) opts.announce(fire_step + h);
    const auto seats = wire_seats(game, victim, op, opts.seats);
    const auto trace = run_episode(
        game, seats,
        derive_seed(seed, "exploit/success", static_cast<std::uint64_t>(e)));

    if (static_cast<int>(trace.steps.size()) < fire_step + h + g) {
      ++result.exclusions;
      continue;
    }
    bool ok = true;
    for (int c = 0; c < g; ++c) {
      const auto& got =
          trace.steps[static_cast<std::size_t>(fire_step + h + c)].actions.at(
              static_cast<std::size_t>(opts.seats.victim_role));
      if (!actions_match(got,
                         bundle.backdoor_seq.actions[static_cast<std::size_t>(c)],
                         bundle.backdoor_seq.tolerance)) {
        ok = false;
        break;
      }
    }
    ++result.injections;
    result.successes += ok ? 1 : 0;
    result.outcomes.push_back(ok);
  }
  return result;
}

std::vector<ProportionRow> evaluate_return_vs_proportion(
    const MarkovGame& game, Policy& victim, const forge::AttackerBundle& bundle,
    std::vector<double> proportions, int n_episodes, std::uint64_t seed,
    const EvalSeats& seats) {
  if (n_episodes <= 0) {
    throw std::invalid_argument("exploit: n_episodes must be positive");
  }
  if (proportions.empty()) {
    throw std::invalid_argument("exploit: no proportion targets");
  }
  if (!std::is_sorted(proportions.begin(), proportions.end())) {
    throw std::invalid_argument("exploit: proportions must ascend");
  }
  bundle.validate(game);
  const double h = static_cast<double>(bundle.trigger_seq.size());
  if (proportions.back() > h / (h + 1.0) + 1e-12) {
    throw std::invalid_argument(
        "exploit: proportion above h/(h+1) is unreachable");
  }
  const auto cover = bundle.make_std_policy(game);

  std::vector<ProportionRow> table;
  for (std::size_t pi = 0; pi < proportions.size(); ++pi) {
    ProportionInjectionPolicy op(cover.get(), bundle.trigger_seq,
                                 proportions[pi]);
    const std::uint64_t block =
        derive_seed(seed, "exploit/proportion", static_cast<std::uint64_t>(pi));
    std::vector<double> returns;
    returns.reserve(static_cast<std::size_t>(n_episodes));
    for (int e = 0; e < n_episodes; ++e) {
      const auto trace =
          run_episode(game, wire_seats(game, victim, op, seats),
                      derive_seed(block, "episode", static_cast<std::uint64_t>(e)));
      returns.push_back(
          trace.return_raw.at(static_cast<std::size_t>(seats.victim_role)));
    }
    ProportionRow row;
    row.target = proportions[pi];
    row.realized = op.total_steps() == 0
                       ? 0.0
                       : static_cast<double>(op.trigger_steps()) /
                             static_cast<double>(op.total_steps());
    row.n = n_episodes;
    row.victim_return = analysis::t_interval(returns);
    table.push_back(row);
  }
  return table;
}

std::string exploit_report_csv(const std::vector<ExploitReportRow>& rows) {
  std::ostringstream out;
  out << "game,victim_id,tip,proportion,n,mean_return,ci_low,ci_high,"
         "trigger_success_rate,spontaneous_rate,exclusions\n";
  for (const auto& r : rows) {
    out << r.game << ',' << r.victim_id << ',' << fmt_double(r.tip) << ','
        << fmt_double(r.proportion) << ',' << r.n << ','
        << fmt_double(r.mean_return) << ',' << fmt_double(r.ci_low) << ','
        << fmt_double(r.ci_high) << ',' << fmt_double(r.trigger_success_rate)
        << ',' << fmt_double(r.spontaneous_rate) << ',' << r.exclusions
        << '\n';
  }
  return out.str();
}

}  // namespace scablab::exploit
