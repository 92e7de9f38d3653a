// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <set>
#include <stdexcept>
#include <vector>

#include "scablab/attack/sequence.hpp"
#include "scablab/envs/grid_duel.hpp"
#include "scablab/envs/registry.hpp"
#include "scablab/envs/team_pong.hpp"
#include "scablab/episode.hpp"
#include "scablab/learn/checkpoint.hpp"
#include "scablab/forge/bundle.hpp"
#include "scablab/forge/detector.hpp"
#include "scablab/forge/rewarding.hpp"
#include "scablab/forge/tournament.hpp"
#include "scablab/learn/learners.hpp"

using namespace scablab;
using namespace scablab::attack;
using namespace scablab::forge;
using doctest::Approx;

namespace {

std::vector<Observation> record_window(const MarkovGame& game, int role,
                                       std::uint64_t seed, int steps) {
  std::vector<std::unique_ptr<Policy>> owned;
  std::vector<Policy*> policies;
  for (int r = 0; r < game.num_roles(); ++r) {
    owned.push_back(envs::make_random_policy(game.action_space(r)));
    policies.push_back(owned.back().get());
  }
  std::vector<Observation> window;
  EpisodeHooks hooks;
  hooks.on_transition = [&](const Transition& t) {
    if (t.role == role && t.after.back().step == steps) {
      window.assign(t.after.begin(), t.after.end());
    }
  };
  EpisodeOptions opts;
  opts.step_cap_override = steps + 1;
  run_episode(game, policies, seed, hooks, opts);
  REQUIRE(!window.empty());
  return window;
}

// Mean per-role return of `policies` over `episodes` fresh seeds.
std::vector<double> mean_returns(const MarkovGame& game,
                                 const std::vector<Policy*>& policies,
                                 std::uint64_t seed, int episodes) {
  std::vector<double> mean(static_cast<std::size_t>(game.num_roles()), 0.0);
  for (int e = 0; e < episodes; ++e) {
    const auto trace = run_episode(
        game, policies, derive_seed(seed, "forge-test/eval",
                                    static_cast<std::uint64_t>(e)));
    for (std::size_t r = 0; r < mean.size(); ++r) {
      mean[r] += trace.return_raw[r];
    }
  }
  for (auto& m : mean) m /= episodes;
  return mean;
}

learn::LearnerConfig quick_tabular(std::int64_t total_steps) {
  learn::LearnerConfig cfg;
  cfg.algo = learn::Algo::kTabularQ;
  cfg.alpha = 0.3;
  cfg.eps = {1.0, 0.05, 0.6};
  cfg.total_steps = total_steps;
  return cfg;
}

std::filesystem::path fresh_temp_dir(const char* tag) {
  const auto dir = std::filesystem::temp_directory_path() /
                   (std::string("scablab_forge_") + tag);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

// ---------------------------------------------------------------------------
// action sequences

TEST_CASE("sequence: validation accepts members and rejects malformed lists") {
  auto game = envs::create_game("grid_duel");
  const auto space = game->action_space(1);

  ActionSequence ok{{Action::of(1), Action::of(2), Action::of(0)}, 0.0};
  CHECK_NOTHROW(ok.validate(space));
  CHECK(ok.size() == 3);
  CHECK(!ok.continuous());

  ActionSequence empty{};
  CHECK_THROWS_AS(empty.validate(space), std::invalid_argument);

  ActionSequence outside{{Action::of(7)}, 0.0};
  CHECK_THROWS_AS(outside.validate(space), std::invalid_argument);

  ActionSequence mixed{{Action::of(1), Action::of({0.1, 0.1})}, 0.0};
  CHECK_THROWS_AS(mixed.validate(space), std::invalid_argument);

  ActionSequence tolerated{{Action::of(1)}, 0.5};
  CHECK_THROWS_AS(tolerated.validate(space), std::invalid_argument);
}

TEST_CASE("sequence: continuous sequences need a tolerance and membership") {
  auto game = envs::create_game("push_point");
  const auto space = game->action_space(0);

  ActionSequence ok{{Action::of({0.5, -0.5}), Action::of({0.0, 1.0})}, 0.01};
  CHECK_NOTHROW(ok.validate(space));
  CHECK(ok.continuous());

  ActionSequence no_tol = ok;
  no_tol.tolerance = 0.0;
  CHECK_THROWS_AS(no_tol.validate(space), std::invalid_argument);

  ActionSequence outside{{Action::of({2.0, 0.0})}, 0.01};
  CHECK_THROWS_AS(outside.validate(space), std::invalid_argument);
}

TEST_CASE("sequence: completion check walks the prefix and flags first miss") {
  const ActionSequence backdoor{{Action::of(1), Action::of(2), Action::of(0)},
                                0.0};

  std::vector<Action> good{Action::of(1), Action::of(2)};
  auto check = check_completion(good, backdoor);
  CHECK(check.matched);
  CHECK(check.mismatch_index == -1);

  std::vector<Action> full{Action::of(1), Action::of(2), Action::of(0)};
  CHECK(check_completion(full, backdoor).matched);

  std::vector<Action> second_bad{Action::of(1), Action::of(3)};
  check = check_completion(second_bad, backdoor);
  CHECK(!check.matched);
  CHECK(check.mismatch_index == 1);

  std::vector<Action> first_bad{Action::of(3)};
  CHECK(check_completion(first_bad, backdoor).mismatch_index == 0);

  std::vector<Action> too_long{Action::of(1), Action::of(2), Action::of(0),
                               Action::of(0)};
  CHECK_THROWS_AS(check_completion(too_long, backdoor), std::invalid_argument);

  std::vector<Action> wrong_kind{Action::of({0.0, 0.0})};
  CHECK_THROWS_AS(check_completion(wrong_kind, backdoor),
                  std::invalid_argument);
}

TEST_CASE("sequence: continuous completion uses the sup-norm tolerance") {
  const ActionSequence backdoor{{Action::of({0.5, -0.5})}, 0.01};

  std::vector<Action> close{Action::of({0.505, -0.509})};
  CHECK(check_completion(close, backdoor).matched);

  std::vector<Action> far{Action::of({0.52, -0.5})};
  const auto check = check_completion(far, backdoor);
  CHECK(!check.matched);
  CHECK(check.mismatch_index == 0);
}

TEST_CASE("sequence: json round-trip preserves both kinds exactly") {
  const ActionSequence discrete{{Action::of(4), Action::of(0)}, 0.0};
  const auto d2 = sequence_from_json(sequence_to_json(discrete));
  REQUIRE(d2.size() == 2);
  CHECK(d2.tolerance == 0.0);
  CHECK(d2.actions[0].discrete == 4);
  CHECK(d2.actions[1].discrete == 0);

  const ActionSequence cont{{Action::of({0.125, -0.75})}, 0.01};
  const auto c2 = sequence_from_json(sequence_to_json(cont));
  REQUIRE(c2.size() == 1);
  CHECK(c2.tolerance == 0.01);
  REQUIRE(c2.actions[0].is_continuous());
  CHECK(c2.actions[0].box[0] == 0.125);
  CHECK(c2.actions[0].box[1] == -0.75);
}

// ---------------------------------------------------------------------------
// detector dataset

TEST_CASE("detector: features are flattened per-pair coordinate deltas") {
  auto game = envs::create_game("grid_duel");
  const auto w3 = record_window(*game, 1, 21, 3);
  REQUIRE(w3.size() >= 3);

  const auto f2 = detector_features(
      *game, 0, ObsWindow(w3.data() + w3.size() - 2, 2));
  const auto f3 = detector_features(
      *game, 0, ObsWindow(w3.data() + w3.size() - 3, 3));
  CHECK(f3.size() == 2 * f2.size());
  // Last pair of the k=3 window is the k=2 window.
  for (std::size_t i = 0; i < f2.size(); ++i) {
    CHECK(f3[f2.size() + i] == f2[i]);
  }
}

TEST_CASE("detector: dataset labels live in the target space and cover it") {
  auto game = envs::create_game("grid_duel");
  const auto data = generate_detector_dataset(*game, 5000, 2, 101);

  CHECK(data.game == "grid_duel");
  CHECK(data.k == 2);
  CHECK(!data.continuous);
  CHECK(data.num_classes == 5);
  CHECK(data.feature_dim > 0);
  REQUIRE(static_cast<int>(data.samples.size()) == 5000);

  std::set<int> seen;
  for (const auto& s : data.samples) {
    REQUIRE(s.label >= 0);
    REQUIRE(s.label < data.num_classes);
    REQUIRE(static_cast<int>(s.features.size()) == data.feature_dim);
    seen.insert(s.label);
  }
  // Random play on a small board produces every effective action, noop
  // (blocked move) included.
  CHECK(static_cast<int>(seen.size()) == 5);
}

TEST_CASE("detector: dataset generation is seed-deterministic") {
  auto game = envs::create_game("grid_duel");
  const auto a = generate_detector_dataset(*game, 400, 2, 5);
  const auto b = generate_detector_dataset(*game, 400, 2, 5);
  const auto c = generate_detector_dataset(*game, 400, 2, 6);

  REQUIRE(a.samples.size() == b.samples.size());
  bool identical = true;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    identical = identical && a.samples[i].label == b.samples[i].label &&
                a.samples[i].features == b.samples[i].features;
  }
  CHECK(identical);

  bool all_same = a.samples.size() == c.samples.size();
  if (all_same) {
    all_same = std::equal(
        a.samples.begin(), a.samples.end(), c.samples.begin(),
        [](const DetectorSample& x, const DetectorSample& y) {
          return x.features == y.features && x.label == y.label;
        });
  }
  CHECK(!all_same);
}

TEST_CASE("detector: split is a deterministic partition") {
  auto game = envs::create_game("grid_duel");
  const auto data = generate_detector_dataset(*game, 1000, 2, 33);
  const auto [train, held] = split_dataset(data, 0.2, 9);
  CHECK(train.samples.size() == 800);
  CHECK(held.samples.size() == 200);
  CHECK(train.num_classes == data.num_classes);

  const auto [train2, held2] = split_dataset(data, 0.2, 9);
  CHECK(train2.samples.size() == train.samples.size());
  CHECK(train2.samples.front().features == train.samples.front().features);

  CHECK_THROWS_AS(split_dataset(data, 0.0, 9), std::invalid_argument);
  CHECK_THROWS_AS(split_dataset(data, 1.0, 9), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// detector training

TEST_CASE("detector: perfect recovery of grid_duel actions from deltas") {
  auto game = envs::create_game("grid_duel");
  const auto data = generate_detector_dataset(*game, 20000, 2, 71);
  const auto [train, held] = split_dataset(data, 0.2, 3);

  const auto det = train_detector(train, 2, 0);
  // Coordinate deltas determine the effective move exactly, so the logistic
  // head should separate them completely.
  CHECK(evaluate_detector(det, held) == Approx(1.0));
}

TEST_CASE("detector: mini_pong held-out accuracy clears the gate") {
  auto game = envs::create_game("mini_pong");
  const auto data = generate_detector_dataset(*game, 20000, 2, 72);
  const auto [train, held] = split_dataset(data, 0.2, 3);

  const auto det = train_detector(train, 2, 0);
  CHECK(evaluate_detector(det, held) >= 0.995);
}

TEST_CASE("detector: shuffled labels collapse accuracy to chance") {
  auto game = envs::create_game("grid_duel");
  auto data = generate_detector_dataset(*game, 8000, 2, 73);

  RngStream shuffle(73, "forge-test/shuffle");
  for (std::size_t i = data.samples.size(); i > 1; --i) {
    std::swap(data.samples[i - 1].label,
              data.samples[shuffle.next_below(i)].label);
  }
  const auto [train, held] = split_dataset(data, 0.2, 3);
  const auto det = train_detector(train, 2, 0);

  const double acc = evaluate_detector(det, held);
  // Label marginals are uneven so "chance" is the majority-class rate,
  // comfortably below the real detector's ceiling.
  CHECK(acc < 0.6);
}

TEST_CASE("detector: continuous push_point regression within tolerance") {
  auto game = envs::create_game("push_point");
  const auto data = generate_detector_dataset(*game, 6000, 2, 74);
  REQUIRE(data.continuous);
  REQUIRE(data.target_dim == 2);

  const auto [train, held] = split_dataset(data, 0.2, 3);
  const auto det = train_detector(train, 2, 0);
  CHECK(evaluate_detector(det, held, 0.01) >= 0.99);
}

TEST_CASE("detector: single-class dataset is rejected") {
  auto game = envs::create_game("grid_duel");
  auto data = generate_detector_dataset(*game, 200, 2, 75);
  for (auto& s : data.samples) s.label = 2;
  CHECK_THROWS_AS(train_detector(data, 2, 0), std::invalid_argument);
}

TEST_CASE("detector: json round-trip reproduces predictions") {
  auto game = envs::create_game("grid_duel");
  const auto data = generate_detector_dataset(*game, 4000, 2, 76);
  const auto det = train_detector(data, 2, 0);
  const auto back = Detector::from_json(det.to_json());

  CHECK(back.k() == det.k());
  CHECK(back.observer_role() == det.observer_role());
  for (int i = 0; i < 50; ++i) {
    const auto& s = data.samples[static_cast<std::size_t>(i * 7)];
    const auto a = det.predict(s.features);
    const auto b = back.predict(s.features);
    CHECK(a.action.discrete == b.action.discrete);
    CHECK(a.confidence == Approx(b.confidence).epsilon(1e-12));
  }
}

TEST_CASE("detector: detect guards its window contract") {
  auto game = envs::create_game("grid_duel");
  const auto data = generate_detector_dataset(*game, 4000, 2, 77);
  const auto det = train_detector(data, 2, 0);

  const auto window = record_window(*game, 1, 5, 4);
  REQUIRE(window.size() >= 2);

  // Happy path: a real window yields a confident in-space answer.
  const auto ok =
      det.detect(*game, ObsWindow(window.data() + window.size() - 2, 2));
  CHECK(game->action_space(0).contains(ok.action));
  CHECK(ok.confidence > 0.0);

  CHECK_THROWS_AS(
      det.detect(*game, ObsWindow(window.data() + window.size() - 3, 3)),
      std::invalid_argument);

  const auto victim_window = record_window(*game, 0, 5, 4);
  CHECK_THROWS_AS(
      det.detect(*game,
                 ObsWindow(victim_window.data() + victim_window.size() - 2, 2)),
      std::invalid_argument);

  // A window straddling a reset is answered with zero confidence, which
  // the attack layer treats as "no match".
  std::vector<Observation> stale{window.back(), window.back()};
  const auto res = det.detect(*game, stale);
  CHECK(res.confidence == 0.0);
}

// ---------------------------------------------------------------------------
// tournament

TEST_CASE("tournament: best member is the best off-diagonal row mean") {
  const std::vector<std::vector<double>> means{
      {0.0, 1.0, 2.0}, {5.0, 0.0, 3.0}, {0.0, 1.0, 0.0}};
  CHECK(select_best_member(means) == 1);

  const std::vector<std::vector<double>> tie{{0.0, 2.0}, {2.0, 0.0}};
  CHECK(select_best_member(tie) == 0);

  CHECK_THROWS_AS(select_best_member({{0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(select_best_member({{0.0, 1.0}, {1.0}}),
                  std::invalid_argument);

  TournamentConfig bad;
  bad.population = 1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("tournament: winner checkpoint is usable and deterministic") {
  auto game = envs::create_game("grid_duel", R"({"board_size":5})");
  TournamentConfig tcfg;
  tcfg.population = 3;
  tcfg.steps_per_member = 1500;
  tcfg.eval_episodes = 30;

  const auto cfg = quick_tabular(tcfg.steps_per_member);
  const auto result = train_standard_policy(*game, 1, tcfg, cfg, 2024);

  REQUIRE(result.eval_means.size() == 3);
  REQUIRE(result.eval_means[0].size() == 3);
  CHECK(result.winner >= 0);
  CHECK(result.winner < 3);
  CHECK(result.member_means[static_cast<std::size_t>(result.winner)] ==
        *std::max_element(result.member_means.begin(),
                          result.member_means.end()));

  auto policy = learn::policy_from_checkpoint(*game, result.checkpoint);
  REQUIRE(policy != nullptr);

  const auto rerun = train_standard_policy(*game, 1, tcfg, cfg, 2024);
  CHECK(rerun.winner == result.winner);
  CHECK(rerun.checkpoint == result.checkpoint);
  CHECK(rerun.eval_means == result.eval_means);
}

TEST_CASE("tournament: trained seat beats a random opponent") {
  auto game = envs::create_game("grid_duel", R"({"board_size":5})");
  TournamentConfig tcfg;
  tcfg.population = 2;
  tcfg.steps_per_member = 6000;
  tcfg.eval_episodes = 20;

  const auto result =
      train_standard_policy(*game, 1, tcfg, quick_tabular(6000), 11);
  auto trained = learn::policy_from_checkpoint(*game, result.checkpoint);
  auto opponent = envs::make_random_policy(game->action_space(0));

  const auto mean =
      mean_returns(*game, {opponent.get(), trained.get()}, 404, 150);
  // Round results are wins minus losses out of 5; random-vs-random centers
  // on zero, so a positive margin this wide is training signal.
  CHECK(mean[1] > 0.5);
}

// ---------------------------------------------------------------------------
// rewarding / penalizing

TEST_CASE("rewarding: trained briber hands the victim free wins") {
  auto game = envs::create_game("grid_duel", R"({"board_size":5})");

  RewardingConfig rcfg;
  rcfg.n_opponents = 2;
  rcfg.alternation_period = 1000;
  rcfg.total_steps = 8000;

  const auto cfg = quick_tabular(rcfg.total_steps);
  const auto result = train_rewarding_policy(*game, 1, 0, cfg, cfg, rcfg, 7);
  CHECK(result.loss_trail.size() == 8);

  auto briber = learn::policy_from_checkpoint(*game, result.checkpoint);
  auto victim = envs::make_random_policy(game->action_space(0));
  auto random_att = envs::make_random_policy(game->action_space(1));

  const auto bribed =
      mean_returns(*game, {victim.get(), briber.get()}, 90, 200);
  const auto baseline =
      mean_returns(*game, {victim.get(), random_att.get()}, 91, 200);

  // Against a briber even a random victim racks up round wins; against a
  // random peer it breaks even.
  CHECK(bribed[0] > baseline[0] + 1.0);
  CHECK(bribed[0] > 2.0);
}

TEST_CASE("rewarding: checkpoint is deterministic in the seed") {
  auto game = envs::create_game("grid_duel", R"({"board_size":5})");
  RewardingConfig rcfg;
  rcfg.n_opponents = 2;
  rcfg.alternation_period = 500;
  rcfg.total_steps = 2000;

  const auto cfg = quick_tabular(rcfg.total_steps);
  const auto a = train_rewarding_policy(*game, 1, 0, cfg, cfg, rcfg, 13);
  const auto b = train_rewarding_policy(*game, 1, 0, cfg, cfg, rcfg, 13);
  const auto c = train_rewarding_policy(*game, 1, 0, cfg, cfg, rcfg, 14);
  CHECK(a.checkpoint == b.checkpoint);
  CHECK(a.loss_trail == b.loss_trail);
  CHECK(a.checkpoint != c.checkpoint);
}

TEST_CASE("rewarding: mode guards separate the two flavors") {
  auto competitive = envs::create_game("grid_duel");
  auto cooperative =
      envs::create_game("team_pong", R"({"mode":"cooperative_pair"})");

  RewardingConfig rcfg;
  rcfg.total_steps = 10;
  const auto cfg = quick_tabular(10);

  CHECK_THROWS_AS(
      train_penalizing_policy(*competitive, 1, 0, cfg, cfg, rcfg, 1),
      std::invalid_argument);
  CHECK_THROWS_AS(
      train_rewarding_policy(*cooperative, 1, 0, cfg, cfg, rcfg, 1, {}),
      std::invalid_argument);
  // Cooperative games have four seats; the caller must supply the rest.
  CHECK_THROWS_AS(
      train_penalizing_policy(*cooperative, 1, 0, cfg, cfg, rcfg, 1, {}),
      std::invalid_argument);
}

TEST_CASE("penalizing: cooperative saboteur trains and sinks team return") {
  auto game =
      envs::create_game("team_pong",
                        R"({"mode":"cooperative_pair","episode_step_cap":200})");
  auto tr2 = envs::make_team_pong_tracker(*game, 2);
  auto tr3 = envs::make_team_pong_tracker(*game, 3);
  std::vector<Policy*> seats{nullptr, nullptr, tr2.get(), tr3.get()};

  RewardingConfig rcfg;
  rcfg.n_opponents = 2;
  rcfg.alternation_period = 1000;
  rcfg.total_steps = 6000;

  const auto cfg = quick_tabular(rcfg.total_steps);
  const auto result =
      train_penalizing_policy(*game, 1, 0, cfg, cfg, rcfg, 3, seats);
  CHECK(!result.loss_trail.empty());

  // An honest front paddle is the team's first line of defense; pair each
  // candidate with an idle back so whatever the front lets through scores.
  auto saboteur = learn::policy_from_checkpoint(*game, result.checkpoint);
  auto straight = envs::make_team_pong_tracker(*game, 1);
  envs::ScriptPolicy idle({}, nullptr, Action::of(envs::TeamPong::kNoop));

  const auto sunk = mean_returns(
      *game, {&idle, saboteur.get(), tr2.get(), tr3.get()}, 55, 60);
  const auto honest = mean_returns(
      *game, {&idle, straight.get(), tr2.get(), tr3.get()}, 56, 60);
  CHECK(honest[0] == Approx(0.0));
  CHECK(sunk[0] < -1.0);
}

// ---------------------------------------------------------------------------
// bundle

TEST_CASE("bundle: directory round-trip preserves every artifact") {
  auto game = envs::create_game("grid_duel");

  AttackerBundle bundle;
  bundle.game_name = "grid_duel";
  bundle.rwd_kind = "rewarding";
  bundle.config.tip = 0.03;
  bundle.config.brt = 2.5;
  bundle.config.gamma = 0.99;
  bundle.trigger_seq = {{Action::of(4), Action::of(4)}, 0.0};
  bundle.backdoor_seq = {{Action::of(2), Action::of(2), Action::of(1)}, 0.0};

  const auto data = generate_detector_dataset(*game, 4000, 2, 42);
  bundle.detector = train_detector(data, 2, 0);

  const auto cfg = quick_tabular(100);
  bundle.std_checkpoint =
      learn::make_learner(*game, 1, 0, cfg, 1)->checkpoint_json();
  bundle.rwd_checkpoint =
      learn::make_learner(*game, 1, 0, cfg, 2)->checkpoint_json();

  CHECK_NOTHROW(bundle.validate(*game));

  const auto dir = fresh_temp_dir("bundle");
  save_bundle(bundle, dir.string());
  for (const char* f : {"std_policy.json", "rwd_policy.json", "detector.json",
                        "bundle_manifest.json"}) {
    CHECK(std::filesystem::exists(dir / f));
  }

  const auto back = load_bundle(dir.string());
  CHECK(back.game_name == bundle.game_name);
  CHECK(back.rwd_kind == "rewarding");
  CHECK(back.config.tip == bundle.config.tip);
  CHECK(back.config.brt == bundle.config.brt);
  CHECK(back.config.gamma == bundle.config.gamma);
  CHECK(back.trigger_seq.actions.size() == 2);
  CHECK(back.backdoor_seq.actions[2].discrete == 1);
  CHECK(back.std_checkpoint == bundle.std_checkpoint);
  CHECK(back.rwd_checkpoint == bundle.rwd_checkpoint);
  CHECK_NOTHROW(back.validate(*game));

  auto policy = back.make_std_policy(*game);
  const auto window = record_window(*game, 1, 5, 3);
  RngStream rng(1, "forge-test/policy");
  CHECK(game->action_space(1).contains(policy->act(window, rng)));

  std::filesystem::remove_all(dir);
}

TEST_CASE("bundle: tampered artifacts fail the digest check") {
  auto game = envs::create_game("grid_duel");

  AttackerBundle bundle;
  bundle.game_name = "grid_duel";
  bundle.rwd_kind = "rewarding";
  bundle.trigger_seq = {{Action::of(4)}, 0.0};
  bundle.backdoor_seq = {{Action::of(2)}, 0.0};
  const auto data = generate_detector_dataset(*game, 2000, 2, 43);
  bundle.detector = train_detector(data, 2, 0);
  const auto cfg = quick_tabular(100);
  bundle.std_checkpoint =
      learn::make_learner(*game, 1, 0, cfg, 1)->checkpoint_json();
  bundle.rwd_checkpoint =
      learn::make_learner(*game, 1, 0, cfg, 2)->checkpoint_json();

  const auto dir = fresh_temp_dir("tamper");
  save_bundle(bundle, dir.string());

  auto text = learn::read_text_file(dir / "rwd_policy.json");
  text[text.size() / 2] = text[text.size() / 2] == 'a' ? 'b' : 'a';
  learn::write_text_file(dir / "rwd_policy.json", text);

  CHECK_THROWS_WITH_AS(load_bundle(dir.string()),
                       doctest::Contains("digest"), std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("bundle: validation rejects wrong game and wrong rwd flavor") {
  auto grid = envs::create_game("grid_duel");
  auto pong = envs::create_game("mini_pong");

  AttackerBundle bundle;
  bundle.game_name = "grid_duel";
  bundle.rwd_kind = "rewarding";
  bundle.trigger_seq = {{Action::of(4)}, 0.0};
  bundle.backdoor_seq = {{Action::of(2)}, 0.0};
  const auto data = generate_detector_dataset(*grid, 2000, 2, 44);
  bundle.detector = train_detector(data, 2, 0);
  const auto cfg = quick_tabular(100);
  bundle.std_checkpoint =
      learn::make_learner(*grid, 1, 0, cfg, 1)->checkpoint_json();
  bundle.rwd_checkpoint =
      learn::make_learner(*grid, 1, 0, cfg, 2)->checkpoint_json();

  CHECK_NOTHROW(bundle.validate(*grid));
  CHECK_THROWS_AS(bundle.validate(*pong), std::invalid_argument);

  AttackerBundle wrong_kind = bundle;
  wrong_kind.rwd_kind = "penalizing";
  CHECK_THROWS_AS(wrong_kind.validate(*grid), std::invalid_argument);

  AttackerBundle bad_tip = bundle;
  bad_tip.config.tip = 1.5;
  CHECK_THROWS_AS(bad_tip.validate(*grid), std::invalid_argument);
}
