// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdint>
#include <string>
#include <vector>

#include "fsm_driver.hpp"
#include "scablab/attack/target_policy.hpp"
#include "scablab/envs/grid_duel.hpp"
#include "scablab/envs/registry.hpp"
#include "scablab/episode.hpp"
#include "scablab/forge/bundle.hpp"
#include "scablab/forge/detector.hpp"
#include "scablab/learn/learners.hpp"
#include "scablab/trace.hpp"

using namespace scablab;
using namespace scablab::attack;
using namespace scablab::testing;

namespace {

// An untrained table thaws to a greedy policy whose rows all tie, so every
// state resolves to the lowest action index. On grid_duel that is kUp: a
// fully deterministic cover policy with no training cost.
std::string blank_tabular_checkpoint(const MarkovGame& game) {
  learn::LearnerConfig cfg;
  cfg.algo = learn::Algo::kTabularQ;
  return learn::make_learner(game, 1, 0, cfg, 7)->checkpoint_json();
}

forge::AttackerBundle noop_bundle(const MarkovGame& game, int h, int g,
                                  double tip, int detector_k) {
  forge::AttackerBundle b;
  b.game_name = game.name();
  b.rwd_kind = "rewarding";
  b.config.tip = tip;
  b.config.brt = 0.0;
  b.config.gamma = 1.0;
  const Action noop = Action::of(envs::GridDuel::kNoop);
  b.trigger_seq.actions.assign(static_cast<std::size_t>(h), noop);
  b.backdoor_seq.actions.assign(static_cast<std::size_t>(g), noop);
  const auto data =
      forge::generate_detector_dataset(game, 5000, detector_k, 424242);
  b.detector = forge::train_detector(data, detector_k, 424242);
  b.std_checkpoint = blank_tabular_checkpoint(game);
  b.rwd_checkpoint = b.std_checkpoint;
  return b;
}

std::string describe(const FsmScript& s) {
  std::string out = "h=" + std::to_string(s.h) + " g=" + std::to_string(s.g) +
                    (s.cooperative ? " coop" : " comp") +
                    " brt=" + std::to_string(s.brt) +
                    " gamma=" + std::to_string(s.gamma) + " d=";
  for (int d : s.decisions) out += static_cast<char>('0' + d);
  return out;
}

}  // namespace

TEST_CASE("state machine matches the reference walk on every short script") {
  const double kBrtGamma[2][2] = {{0.0, 1.0}, {0.6, 0.5}};
  const int kLen = 8;
  long long runs = 0;
  for (int h = 1; h <= 3; ++h) {
    for (int g = 1; g <= 3; ++g) {
      for (int coop = 0; coop < 2; ++coop) {
        for (const auto& bg : kBrtGamma) {
          FsmScript s;
          s.h = h;
          s.g = g;
          s.cooperative = coop == 1;
          s.brt = bg[0];
          s.gamma = bg[1];
          s.num_steps = kLen;
          long long total = 1;
          for (int i = 0; i < kLen; ++i) total *= 3;
          for (long long index = 0; index < total; ++index) {
            s.decisions = decisions_from_index(index, kLen);
            const FsmRun want = run_fsm_oracle(s);
            const FsmRun got = run_fsm_impl(s);
            if (!(want == got)) {
              CAPTURE(describe(s));
              REQUIRE(want == got);
            }
            ++runs;
          }
        }
      }
    }
  }
  CHECK(runs == 9LL * 2 * 2 * 6561);
}

TEST_CASE("machine that never fires stays in winning and plays cover") {
  FsmScript s;
  s.h = 2;
  s.g = 2;
  s.num_steps = 50;
  s.decisions.assign(50, 0);  // every coin comes up tails
  const FsmRun run = run_fsm_impl(s);
  REQUIRE(run.steps.size() == 50);
  for (const auto& rec : run.steps) {
    CHECK(rec.tag == static_cast<int>(FsmTag::kWinning));
    CHECK(rec.action == 0);
    CHECK_FALSE(rec.trigger_started);
    CHECK_FALSE(rec.completion);
  }
  CHECK(run.completion_log.empty());
}

TEST_CASE("hand-checked transition table for a two-step trigger") {
  FsmScript s;
  s.h = 2;
  s.g = 2;
  s.brt = 0.0;
  s.gamma = 1.0;
  s.num_steps = 9;
  // Consumed in order: coin(fire), compare, compare, reward, coin(tails).
  s.decisions = {1, 0, 0, 0, 0};
  const FsmRun run = run_fsm_impl(s);
  REQUIRE(run == run_fsm_oracle(s));

  const int W = static_cast<int>(FsmTag::kWinning);
  const int T = static_cast<int>(FsmTag::kTriggering);
  const int O = static_cast<int>(FsmTag::kObserving);
  const int R = static_cast<int>(FsmTag::kRewarding);
  const std::vector<int> tags = {W, T, T, O, O, O, R, R, W};
  const std::vector<int> actions = {0,
                                    kOracleTriggerBase[0],
                                    kOracleTriggerBase[1],
                                    0,
                                    0,
                                    0,
                                    1,
                                    1,
                                    0};
  REQUIRE(run.steps.size() == tags.size());
  for (std::size_t t = 0; t < tags.size(); ++t) {
    CAPTURE(t);
    CHECK(run.steps[t].tag == tags[t]);
    CHECK(run.steps[t].action == actions[t]);
  }
  CHECK(run.steps[1].trigger_started);
  CHECK(run.steps[2].trigger_completed);
  CHECK(run.steps[5].completion);
  CHECK(run.steps[5].rewarding_entered);
  // Zero bribe tolerance: the first paid step loses 1, so the machine backs
  // out on the very next evaluation, still acting under the bribe policy.
  CHECK(run.steps[7].rewarding_exited);
  CHECK(run.completion_log == std::vector<int>{4});
}

TEST_CASE("completion log records the last step of the answer window") {
  for (int h = 1; h <= 3; ++h) {
    for (int g = 1; g <= 3; ++g) {
      FsmScript s;
      s.h = h;
      s.g = g;
      s.num_steps = h + g + 2;
      s.decisions.assign(1, 1);  // fire on the first coin, then all matches
      s.decisions.resize(static_cast<std::size_t>(1 + g), 0);
      const FsmRun run = run_fsm_impl(s);
      CAPTURE(h);
      CAPTURE(g);
      // Fired at step 0: trigger covers 1..h, answers h+1..h+g.
      REQUIRE(run.completion_log.size() == 1);
      CHECK(run.completion_log[0] == h + g);
      CHECK(run.steps.back().completion);
    }
  }
}

TEST_CASE("cooperative machine penalizes a mismatch and forgives a match") {
  FsmScript s;
  s.h = 1;
  s.g = 2;
  s.cooperative = true;
  s.num_steps = 8;

  SUBCASE("full match returns to winning with no penalty") {
    s.decisions = {1, 0, 0, 0};  // fire, match, match, tails
    const FsmRun run = run_fsm_impl(s);
    REQUIRE(run == run_fsm_oracle(s));
    CHECK(run.steps[4].completion);
    CHECK_FALSE(run.steps[4].rewarding_entered);
    CHECK(run.steps[5].tag == static_cast<int>(FsmTag::kWinning));
    CHECK(run.completion_log == std::vector<int>{3});
  }

  SUBCASE("mismatch triggers the penalty arm") {
    s.decisions = {1, 1, 0, 0};  // fire, mismatch, reward, tails
    const FsmRun run = run_fsm_impl(s);
    REQUIRE(run == run_fsm_oracle(s));
    CHECK(run.steps[3].rewarding_entered);
    CHECK_FALSE(run.steps[3].completion);
    CHECK(run.steps[4].tag == static_cast<int>(FsmTag::kPenalizing));
    CHECK(run.steps[4].action == 1);
    // Paid step loses 1 against a zero budget: out at the next evaluation.
    CHECK(run.steps[5].rewarding_exited);
    CHECK(run.completion_log.empty());
  }
}

TEST_CASE("low detector confidence counts as a mismatch") {
  FsmScript s;
  s.h = 1;
  s.g = 1;
  s.num_steps = 4;
  s.decisions = {1, 2, 0};  // fire, then a correct guess at confidence 0.3
  const FsmRun run = run_fsm_impl(s);
  CHECK_FALSE(run.steps[3].completion);
  CHECK(run.completion_log.empty());
}

TEST_CASE("rewarding exit spends the bribe budget before leaving") {
  FsmScript s;
  s.h = 1;
  s.g = 1;
  s.brt = 1.2;
  s.gamma = 0.5;
  s.num_steps = 8;
  // fire, match, then two losing bribe steps: -1, then -1 * 0.5.
  s.decisions = {1, 0, 0, 0, 0};
  const FsmRun run = run_fsm_impl(s);
  REQUIRE(run == run_fsm_oracle(s));
  CHECK(run.steps[3].completion);
  CHECK(run.steps[4].tag == static_cast<int>(FsmTag::kRewarding));
  CHECK_FALSE(run.steps[5].rewarding_exited);  // spent 1.0 of 1.2
  CHECK(run.steps[6].rewarding_exited);        // spent 1.5 of 1.2
  CHECK(run.steps[7].tag == static_cast<int>(FsmTag::kWinning));
}

TEST_CASE("backdoor target oracle answers inside the window and defers outside") {
  ActionSequence backdoor;
  backdoor.actions = {Action::of(2), Action::of(0), Action::of(1)};
  const Action fallback = Action::of(4);
  const int i = 10;
  CHECK(backdoor_target_action(9, i, backdoor, fallback).discrete == 4);
  CHECK(backdoor_target_action(10, i, backdoor, fallback).discrete == 2);
  CHECK(backdoor_target_action(11, i, backdoor, fallback).discrete == 0);
  CHECK(backdoor_target_action(12, i, backdoor, fallback).discrete == 1);
  CHECK(backdoor_target_action(13, i, backdoor, fallback).discrete == 4);
  // Negative start means no live trigger: always the fallback.
  CHECK(backdoor_target_action(3, -1, backdoor, fallback).discrete == 4);
}

TEST_CASE("wrapper completes the protocol against a compliant victim") {
  const auto game = envs::create_game("grid_duel");
  const auto bundle = noop_bundle(*game, 1, 1, /*tip=*/1.0, /*k=*/2);
  attack::ScabAttackerPolicy attacker(*game, bundle, bundle.config, 99);
  envs::ScriptPolicy victim({}, nullptr, Action::of(envs::GridDuel::kNoop));
  std::vector<Policy*> seats = {&victim, &attacker};

  const EpisodeTrace trace = run_episode(*game, seats, 31337);

  // Fires immediately at tip=1: trigger at 1, victim answers at 2, the
  // detector syncs at 2 and votes at 3.
  REQUIRE(trace.steps.size() >= 5);
  CHECK(trace.steps[0].events.tag == FsmTag::kWinning);
  CHECK(trace.steps[1].events.tag == FsmTag::kTriggering);
  CHECK(trace.steps[1].events.trigger_started);
  CHECK(trace.steps[1].events.trigger_completed);
  CHECK(trace.steps[1].actions[1].discrete == envs::GridDuel::kNoop);
  CHECK(trace.steps[2].events.tag == FsmTag::kObserving);
  CHECK(trace.steps[3].events.tag == FsmTag::kObserving);
  CHECK(trace.steps[3].events.completion);
  CHECK(trace.steps[3].events.rewarding_entered);
  CHECK(trace.steps[4].events.tag == FsmTag::kRewarding);
  // Cover steps play the blank table's tie-break, kUp.
  CHECK(trace.steps[0].actions[1].discrete == envs::GridDuel::kUp);
  CHECK(trace.steps[2].actions[1].discrete == envs::GridDuel::kUp);

  CHECK(attacker.tip_draws() >= 1);
  CHECK(attacker.triggers_completed() >= 1);
  CHECK(attacker.completions() >= 1);
  REQUIRE_FALSE(attacker.fsm().completion_log.empty());
  CHECK(attacker.fsm().completion_log.front() == 2);

  // The bribe policy climbs into the wall eventually; the lost round is a
  // negative reward against a zero budget, so the machine backs out.
  bool exited = false;
  bool winning_after_exit = false;
  for (std::size_t t = 5; t < trace.steps.size(); ++t) {
    if (exited && trace.steps[t].events.tag == FsmTag::kWinning) {
      winning_after_exit = true;
      break;
    }
    if (trace.steps[t].events.rewarding_exited) exited = true;
  }
  CHECK(exited);
  CHECK(winning_after_exit);

  for (const auto& step : trace.steps) {
    CHECK(game->action_space(1).contains(step.actions[1]));
  }
}

TEST_CASE("dormant machine is indistinguishable from its cover policy") {
  const auto game = envs::create_game("grid_duel");
  const auto bundle = noop_bundle(*game, 2, 2, /*tip=*/0.0, /*k=*/2);

  attack::ScabAttackerPolicy dormant(*game, bundle, bundle.config, 5);
  const auto cover = bundle.make_std_policy(*game);
  envs::ScriptPolicy victim_a({}, nullptr, Action::of(envs::GridDuel::kNoop));
  envs::ScriptPolicy victim_b({}, nullptr, Action::of(envs::GridDuel::kNoop));

  for (std::uint64_t seed : {11ULL, 22ULL, 33ULL}) {
    std::vector<Policy*> poisoned = {&victim_a, &dormant};
    std::vector<Policy*> clean = {&victim_b, cover.get()};
    const std::string a = trace_to_jsonl(run_episode(*game, poisoned, seed));
    const std::string b = trace_to_jsonl(run_episode(*game, clean, seed));
    CHECK(a == b);
  }
  CHECK(dormant.tip_draws() == 0);
  CHECK(dormant.triggers_completed() == 0);
}

TEST_CASE("short observation windows never pass the detector") {
  const auto game = envs::create_game("grid_duel");
  const auto bundle = noop_bundle(*game, 1, 1, /*tip=*/1.0, /*k=*/6);
  attack::ScabAttackerPolicy attacker(*game, bundle, bundle.config, 7);
  envs::ScriptPolicy victim({}, nullptr, Action::of(envs::GridDuel::kNoop));
  std::vector<Policy*> seats = {&victim, &attacker};

  EpisodeOptions opts;
  opts.step_cap_override = 4;  // the only vote lands on a 4-step history
  const EpisodeTrace trace = run_episode(*game, seats, 17, {}, opts);

  REQUIRE(trace.steps.size() == 4);
  CHECK(trace.steps[3].events.tag == FsmTag::kObserving);
  CHECK_FALSE(trace.steps[3].events.completion);
  CHECK(attacker.completions() == 0);
}

TEST_CASE("episode cut during the trigger never counts as an injection") {
  const auto game = envs::create_game("grid_duel");
  const auto bundle = noop_bundle(*game, 3, 1, /*tip=*/1.0, /*k=*/2);
  attack::ScabAttackerPolicy attacker(*game, bundle, bundle.config, 3);
  envs::ScriptPolicy victim({}, nullptr, Action::of(envs::GridDuel::kNoop));
  std::vector<Policy*> seats = {&victim, &attacker};

  EpisodeOptions cut;
  cut.step_cap_override = 2;
  const EpisodeTrace trace = run_episode(*game, seats, 41, {}, cut);
  REQUIRE(trace.steps.size() == 2);
  CHECK(trace.steps[1].events.trigger_started);
  CHECK_FALSE(trace.steps[1].events.trigger_completed);
  CHECK(attacker.tip_draws() == 1);
  CHECK(attacker.tip_successes() == 1);
  CHECK(attacker.triggers_completed() == 0);

  // A fresh episode starts the trigger over from the first element.
  const EpisodeTrace full = run_episode(*game, seats, 41);
  CHECK(full.steps[1].events.trigger_started);
  CHECK(full.steps[3].events.trigger_completed);
  CHECK(full.steps[5].events.completion);
  CHECK(attacker.triggers_completed() >= 1);
  REQUIRE_FALSE(attacker.fsm().completion_log.empty());
  CHECK(attacker.fsm().completion_log.front() == 4);
}

TEST_CASE("injection accounting tracks draws, successes and completions") {
  const auto game = envs::create_game("grid_duel");
  const auto bundle = noop_bundle(*game, 1, 1, /*tip=*/0.5, /*k=*/2);
  attack::ScabAttackerPolicy attacker(*game, bundle, bundle.config, 1234);
  envs::ScriptPolicy victim({}, nullptr, Action::of(envs::GridDuel::kNoop));
  std::vector<Policy*> seats = {&victim, &attacker};

  for (std::uint64_t e = 0; e < 30; ++e) {
    run_episode(*game, seats, 9000 + e);
  }
  REQUIRE(attacker.tip_draws() > 50);
  CHECK(attacker.tip_successes() > 0);
  CHECK(attacker.tip_successes() < attacker.tip_draws());
  const double rate = static_cast<double>(attacker.tip_successes()) /
                      static_cast<double>(attacker.tip_draws());
  CHECK(rate > 0.35);
  CHECK(rate < 0.65);
  CHECK(attacker.triggers_completed() <= attacker.tip_successes());
  CHECK(attacker.completions() <= attacker.triggers_completed());
}
