// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#include "scablab/episode.hpp"

#include <stdexcept>

#include "scablab/digest.hpp"

namespace scablab {

EpisodeTrace run_episode_interfered(const MarkovGame& game,
                                    const std::vector<Policy*>& policies,
                                    std::uint64_t seed,
                                    const Interference& interference,
                                    const EpisodeHooks& hooks,
                                    const EpisodeOptions& opts) {
  const int n = game.num_roles();
  if (static_cast<int>(policies.size()) != n) {
    throw std::invalid_argument("run_episode: one policy per role required");
  }

  EpisodeTrace trace;
  trace.seed = seed;
  trace.game = game.name();
  trace.config_digest = digest_string(game.config_text());
  trace.roles = game.role_names();
  trace.gamma = opts.discount.gamma;
  trace.verbose = opts.verbose_frames;
  trace.return_raw.assign(static_cast<std::size_t>(n), 0.0);

  RngStream env_rng(seed, "env");
  std::vector<RngStream> role_rng;
  role_rng.reserve(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) {
    role_rng.emplace_back(seed, "policy/" + trace.roles[static_cast<std::size_t>(r)]);
  }

  const int cap = opts.step_cap_override > 0 ? opts.step_cap_override
                                             : game.step_cap();
  if (cap <= 0) throw std::invalid_argument("run_episode: step cap must be > 0");

  State state = game.initial_state(env_rng);
  std::vector<std::vector<Observation>> history(static_cast<std::size_t>(n));
  auto push_observations = [&](const State& s, int step) {
    for (int r = 0; r < n; ++r) {
      Observation obs = game.observe(s, r);
      obs.step = step;
      if (interference.observation) interference.observation(r, step, obs);
      history[static_cast<std::size_t>(r)].push_back(std::move(obs));
    }
  };
  push_observations(state, 0);

  for (auto* p : policies) p->begin_episode();

  std::vector<std::vector<double>> reward_rows(static_cast<std::size_t>(n));
  bool done = false;
  int t = 0;
  for (; t < cap && !done; ++t) {
    std::vector<Action> actions(static_cast<std::size_t>(n));
    StepEvents events;
    for (int r = 0; r < n; ++r) {
      auto& hist = history[static_cast<std::size_t>(r)];
      actions[static_cast<std::size_t>(r)] =
          policies[static_cast<std::size_t>(r)]->act(
              ObsWindow(hist.data(), hist.size()),
              role_rng[static_cast<std::size_t>(r)]);
      const StepEvents ev = policies[static_cast<std::size_t>(r)]->last_events();
      if (ev.tag != FsmTag::kNone) events = ev;
      if (!game.action_space(r).contains(actions[static_cast<std::size_t>(r)])) {
        throw std::invalid_argument(game.name() + ": action outside space for role " +
                                    trace.roles[static_cast<std::size_t>(r)]);
      }
    }

    StepResult res = game.step(state, actions, env_rng);
    if (interference.reward) {
      for (int r = 0; r < n; ++r) {
        auto& hist = history[static_cast<std::size_t>(r)];
        res.rewards[static_cast<std::size_t>(r)] = interference.reward(
            r, t, ObsWindow(hist.data(), hist.size()),
            actions[static_cast<std::size_t>(r)],
            res.rewards[static_cast<std::size_t>(r)]);
      }
    }

    TraceStep rec;
    rec.state_digest = digest_doubles(state);
    for (int r = 0; r < n; ++r) {
      rec.obs_digests.push_back(digest_doubles(
          history[static_cast<std::size_t>(r)].back().frame));
    }
    rec.actions = actions;
    rec.rewards = res.rewards;
    rec.events = events;
    if (trace.verbose) {
      std::vector<std::vector<double>> row;
      for (int r = 0; r < n; ++r) {
        row.push_back(history[static_cast<std::size_t>(r)].back().frame);
      }
      trace.frames.push_back(std::move(row));
    }
    trace.steps.push_back(std::move(rec));

    done = res.done || t + 1 >= cap;
    state = std::move(res.next);
    push_observations(state, t + 1);

    for (int r = 0; r < n; ++r) {
      const double reward = res.rewards[static_cast<std::size_t>(r)];
      reward_rows[static_cast<std::size_t>(r)].push_back(reward);
      trace.return_raw[static_cast<std::size_t>(r)] += reward;
      policies[static_cast<std::size_t>(r)]->feed_reward(reward);
    }
    if (hooks.on_transition) {
      for (int r = 0; r < n; ++r) {
        const auto& hist = history[static_cast<std::size_t>(r)];
        Transition tr;
        tr.role = r;
        tr.before = ObsWindow(hist.data(), hist.size() - 1);
        tr.action = actions[static_cast<std::size_t>(r)];
        tr.reward = res.rewards[static_cast<std::size_t>(r)];
        tr.after = ObsWindow(hist.data(), hist.size());
        tr.done = done;
        hooks.on_transition(tr);
      }
    }
  }

  trace.terminal_step = t - 1;
  trace.final_state_digest = digest_doubles(state);
  for (int r = 0; r < n; ++r) {
    trace.return_discounted.push_back(discounted_return(
        reward_rows[static_cast<std::size_t>(r)], opts.discount));
  }
  return trace;
}

EpisodeTrace run_episode(const MarkovGame& game,
                         const std::vector<Policy*>& policies,
                         std::uint64_t seed, const EpisodeHooks& hooks,
                         const EpisodeOptions& opts) {
  return run_episode_interfered(game, policies, seed, Interference{}, hooks,
                                opts);
}

}  // namespace scablab
