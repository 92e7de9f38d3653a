// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>

#include "scablab/envs/grid_duel.hpp"
#include "scablab/envs/mini_pong.hpp"
#include "scablab/envs/push_point.hpp"
#include "scablab/envs/registry.hpp"
#include "scablab/envs/team_pong.hpp"
#include "scablab/episode.hpp"

using namespace scablab;
using namespace scablab::envs;

namespace {

// Plays via a delegate (or fixed action) and keeps a copy of every
// observation it acted from, so tests can replay window_valid and
// coordinate-delta inference offline.
class RecorderPolicy : public Policy {
 public:
  explicit RecorderPolicy(Action fixed) : fixed_(std::move(fixed)) {}
  explicit RecorderPolicy(Policy* delegate) : delegate_(delegate) {}
  RecorderPolicy(Policy* delegate,
                 std::function<Action(const Observation&)> fn)
      : delegate_(delegate), fn_(std::move(fn)) {}

  Action act(ObsWindow window, RngStream& rng) override {
    seen.push_back(window.back());
    Action a = fn_        ? fn_(window.back())
               : delegate_ ? delegate_->act(window, rng)
                           : fixed_;
    played.push_back(a);
    return a;
  }

  std::vector<Observation> seen;
  std::vector<Action> played;

 private:
  Action fixed_ = Action::of(0);
  Policy* delegate_ = nullptr;
  std::function<Action(const Observation&)> fn_;
};

std::uint64_t find_seed(const std::function<bool(std::uint64_t)>& pred) {
  for (std::uint64_t seed = 1; seed < 5000; ++seed) {
    if (pred(seed)) return seed;
  }
  REQUIRE_MESSAGE(false, "no seed satisfies the probe within 5000 tries");
  return 0;
}

Observation first_obs(const MarkovGame& game, std::uint64_t seed, int role) {
  RngStream env(seed, "env");
  return game.observe(game.initial_state(env), role);
}

constexpr int kUp = 0, kDown = 1, kLeft = 2, kRight = 3, kNoop = 4;

std::uint64_t centered_grid_seed(const MarkovGame& game, int board) {
  return find_seed([&](std::uint64_t seed) {
    const auto obs = first_obs(game, seed, 0);
    return static_cast<int>(obs.frame[static_cast<std::size_t>(board * board)]) ==
           board / 2;
  });
}

}  // namespace

TEST_CASE("grid_duel: wall crash loses the round for the crasher") {
  auto game = create_game("grid_duel", R"({"board_size":5,"rounds_per_episode":1})");
  const auto seed = centered_grid_seed(*game, 5);
  ScriptPolicy victim({Action::of(kNoop), Action::of(kNoop)}, nullptr,
                      Action::of(kNoop));
  ScriptPolicy attacker({Action::of(kRight), Action::of(kRight)}, nullptr,
                        Action::of(kNoop));
  const auto trace = run_episode(*game, {&victim, &attacker}, seed);
  REQUIRE(trace.num_steps() == 2);
  CHECK(trace.steps[0].rewards == std::vector<double>{0.0, 0.0});
  CHECK(trace.steps[1].rewards == std::vector<double>{1.0, -1.0});
  CHECK(trace.return_raw == std::vector<double>{1.0, -1.0});
}

TEST_CASE("grid_duel: head-on collision is a draw") {
  auto game = create_game("grid_duel", R"({"board_size":5,"rounds_per_episode":1})");
  const auto seed = centered_grid_seed(*game, 5);
  ScriptPolicy victim({Action::of(kRight)}, nullptr, Action::of(kNoop));
  ScriptPolicy attacker({Action::of(kLeft)}, nullptr, Action::of(kNoop));
  const auto trace = run_episode(*game, {&victim, &attacker}, seed);
  REQUIRE(trace.num_steps() == 1);
  CHECK(trace.return_raw == std::vector<double>{0.0, 0.0});
}

TEST_CASE("grid_duel: trails are lethal and visible") {
  auto game = create_game("grid_duel", R"({"board_size":5,"rounds_per_episode":1})");
  const auto seed = centered_grid_seed(*game, 5);
  ScriptPolicy victim({Action::of(kRight), Action::of(kLeft)}, nullptr,
                      Action::of(kNoop));
  ScriptPolicy attacker({Action::of(kNoop), Action::of(kNoop)}, nullptr,
                        Action::of(kNoop));
  EpisodeOptions opts;
  opts.verbose_frames = true;
  const auto trace = run_episode(*game, {&victim, &attacker}, seed, {}, opts);
  REQUIRE(trace.num_steps() == 2);
  // Backtracking into the trail laid on the vacated cell crashes the victim.
  CHECK(trace.steps[1].rewards == std::vector<double>{-1.0, 1.0});

  const auto& f = trace.frames[1][0];  // victim's view after its first move
  auto cell = [&](int r, int c) { return f[static_cast<std::size_t>(r * 5 + c)]; };
  CHECK(cell(2, 1) == 1.0);  // trail on the vacated cell
  CHECK(cell(2, 2) == 2.0);  // self
  CHECK(cell(2, 3) == 3.0);  // opponent
  const auto& g = trace.frames[1][1];  // attacker sees the mirror labeling
  CHECK(g[2 * 5 + 2] == 3.0);
  CHECK(g[2 * 5 + 3] == 2.0);
}

TEST_CASE("grid_duel: simultaneous wall crashes draw the round") {
  auto game = create_game("grid_duel", R"({"board_size":5,"rounds_per_episode":1})");
  const auto seed = centered_grid_seed(*game, 5);
  ScriptPolicy a({}, nullptr, Action::of(kUp));
  ScriptPolicy b({}, nullptr, Action::of(kUp));
  const auto trace = run_episode(*game, {&a, &b}, seed);
  // Centered start: two legal ups, then both leave the board together.
  REQUIRE(trace.num_steps() == 3);
  CHECK(trace.return_raw == std::vector<double>{0.0, 0.0});
}

TEST_CASE("grid_duel: round timeout is a draw and ends the episode at the cap") {
  auto game = create_game(
      "grid_duel", R"({"board_size":5,"rounds_per_episode":1,"round_step_cap":4})");
  ScriptPolicy a({}, nullptr, Action::of(kNoop));
  ScriptPolicy b({}, nullptr, Action::of(kNoop));
  const auto trace = run_episode(*game, {&a, &b}, 12);
  REQUIRE(trace.num_steps() == 4);
  CHECK(trace.return_raw == std::vector<double>{0.0, 0.0});
}

TEST_CASE("grid_duel: rounds reset and wins accumulate") {
  auto game = create_game("grid_duel", R"({"board_size":5,"rounds_per_episode":3})");
  const auto seed = centered_grid_seed(*game, 5);
  ScriptPolicy victim({}, nullptr, Action::of(kNoop));
  ScriptPolicy attacker({}, nullptr, Action::of(kRight));
  RecorderPolicy vic_rec(&victim);
  const auto trace = run_episode(*game, {&vic_rec, &attacker}, seed);
  // Attacker drives into the right wall two steps into every round.
  REQUIRE(trace.num_steps() == 6);
  for (int t : {1, 3, 5}) {
    CHECK(trace.steps[static_cast<std::size_t>(t)].rewards ==
          std::vector<double>{1.0, -1.0});
  }
  CHECK(trace.return_raw == std::vector<double>{3.0, -3.0});

  // Consecutive observations straddling a round reset are not a valid window.
  REQUIRE(vic_rec.seen.size() == 6);
  for (std::size_t i = 0; i + 1 < vic_rec.seen.size(); ++i) {
    const bool valid = game->window_valid(vic_rec.seen[i], vic_rec.seen[i + 1]);
    CHECK(valid == (i % 2 == 0));
  }
}

TEST_CASE("grid_duel: observed attacker deltas recover its actions") {
  auto game = create_game("grid_duel", "{}");
  int checked = 0;
  for (std::uint64_t seed : {77ull, 78ull, 79ull}) {
    auto victim = make_random_policy(game->action_space(0));
    auto attacker = make_random_policy(game->action_space(1));
    RecorderPolicy vic_rec(victim.get());
    RecorderPolicy att_rec(attacker.get());
    (void)run_episode(*game, {&vic_rec, &att_rec}, seed);

    for (std::size_t i = 0; i + 1 < vic_rec.seen.size(); ++i) {
      if (!game->window_valid(vic_rec.seen[i], vic_rec.seen[i + 1])) continue;
      const auto before = game->tracked_coords(vic_rec.seen[i], 1);
      const auto after = game->tracked_coords(vic_rec.seen[i + 1], 1);
      const std::vector<double> delta = {after[0] - before[0],
                                         after[1] - before[1]};
      const Action inferred = game->action_from_coord_delta(delta);
      // Inside a round every move executes literally, so inference is exact.
      CHECK(inferred == att_rec.played[i]);
      ++checked;
    }
  }
  CHECK(checked > 30);
}

TEST_CASE("grid_duel: config validation") {
  CHECK_THROWS_AS(create_game("grid_duel", R"({"board_size":4})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(create_game("grid_duel", R"({"rounds_per_episode":0})"),
                  std::invalid_argument);
  const std::vector<double> bad = {2.0, 2.0};
  auto game = create_game("grid_duel", "{}");
  CHECK_THROWS_AS((void)game->action_from_coord_delta(bad),
                  std::invalid_argument);
}

namespace {

std::uint64_t mini_pong_serve_seed(const MarkovGame& game, int vx, int vy) {
  return find_seed([&](std::uint64_t seed) {
    const auto obs = first_obs(game, seed, 0);
    return static_cast<int>(obs.frame[4]) == vx &&
           static_cast<int>(obs.frame[5]) == vy;
  });
}

}  // namespace

TEST_CASE("mini_pong: hand-traced ball path, miss, and mirroring") {
  auto game = create_game("mini_pong", "{}");  // 9 x 7, paddle 2
  const auto seed = mini_pong_serve_seed(*game, /*vx=*/1, /*vy=*/-1);
  ScriptPolicy l({}, nullptr, Action::of(MiniPong::kNoop));
  ScriptPolicy r({}, nullptr, Action::of(MiniPong::kNoop));
  EpisodeOptions opts;
  opts.verbose_frames = true;
  const auto trace = run_episode(*game, {&l, &r}, seed, {}, opts);

  // Serve from (4,3) with velocity (1,-1): the ball reaches the right wall
  // at y=0 after reflecting off the top edge, missing the centered paddle.
  const std::vector<std::pair<int, int>> path = {{4, 3}, {5, 2}, {6, 1}, {7, 0}};
  for (std::size_t t = 0; t < path.size(); ++t) {
    CHECK(static_cast<int>(trace.frames[t][0][2]) == path[t].first);
    CHECK(static_cast<int>(trace.frames[t][0][3]) == path[t].second);
  }
  CHECK(trace.steps[3].rewards == std::vector<double>{1.0, -1.0});

  // The right player sees a mirrored court: x and vx flip, y does not.
  CHECK(static_cast<int>(trace.frames[1][1][2]) == 8 - 5);
  CHECK(static_cast<int>(trace.frames[1][1][4]) == -1);
  CHECK(static_cast<int>(trace.frames[1][1][3]) == 2);
}

TEST_CASE("mini_pong: a stationary paddle loses every point to the tracker") {
  auto game = create_game("mini_pong", "{}");
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
    CAPTURE(seed);
    ScriptPolicy still({}, nullptr, Action::of(MiniPong::kNoop));
    auto tracker = make_mini_pong_tracker(*game, 1);
    const auto trace = run_episode(*game, {&still, tracker.get()}, seed);
    for (const auto& s : trace.steps) CHECK(s.rewards[1] >= 0.0);
    CHECK(trace.return_raw[0] == -5.0);  // 0 : points_to_win
  }
}

TEST_CASE("mini_pong: tracker vs tracker rallies to the step cap") {
  auto game = create_game("mini_pong", R"({"episode_step_cap":300})");
  auto lt = make_mini_pong_tracker(*game, 0);
  auto rt = make_mini_pong_tracker(*game, 1);
  const auto trace = run_episode(*game, {lt.get(), rt.get()}, 9);
  CHECK(trace.num_steps() == 300);
  CHECK(trace.return_raw == std::vector<double>{0.0, 0.0});
}

TEST_CASE("mini_pong: blocked paddle moves read as effective noops") {
  auto game = create_game("mini_pong", "{}");
  ScriptPolicy pushes_up({}, nullptr, Action::of(MiniPong::kUp));
  RecorderPolicy rec(&pushes_up);
  ScriptPolicy other({}, nullptr, Action::of(MiniPong::kNoop));
  (void)run_episode(*game, {&rec, &other}, 2, {},
                    EpisodeOptions{.step_cap_override = 6});

  REQUIRE(rec.seen.size() == 6);
  std::vector<int> inferred;
  for (std::size_t i = 0; i + 1 < rec.seen.size(); ++i) {
    REQUIRE(game->window_valid(rec.seen[i], rec.seen[i + 1]));
    const double dy = game->tracked_coords(rec.seen[i + 1], 0)[0] -
                      game->tracked_coords(rec.seen[i], 0)[0];
    const std::vector<double> delta = {dy};
    inferred.push_back(game->action_from_coord_delta(delta).discrete);
  }
  // Paddle starts at y=2, hits the wall after two ups, then the executed
  // "up" is clamped and the observable effective action is a noop.
  CHECK(inferred == std::vector<int>{MiniPong::kUp, MiniPong::kUp,
                                     MiniPong::kNoop, MiniPong::kNoop,
                                     MiniPong::kNoop});
}

TEST_CASE("team_pong: two trackers shut out an idle team") {
  auto game = create_game("team_pong", "{}");
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    CAPTURE(seed);
    std::vector<std::unique_ptr<Policy>> ps;
    std::vector<Policy*> ptrs;
    for (int role = 0; role < 2; ++role) {
      ps.push_back(make_team_pong_tracker(*game, role));
      ptrs.push_back(ps.back().get());
    }
    for (int role = 2; role < 4; ++role) {
      ps.push_back(std::make_unique<ScriptPolicy>(
          std::vector<Action>{}, nullptr, Action::of(TeamPong::kNoop)));
      ptrs.push_back(ps.back().get());
    }
    const auto trace = run_episode(*game, ptrs, seed);
    for (const auto& s : trace.steps) CHECK(s.rewards[0] >= 0.0);
    CHECK(trace.return_raw[0] == 5.0);
  }
}

TEST_CASE("team_pong: four trackers rally to the step cap") {
  auto game = create_game("team_pong", R"({"episode_step_cap":400})");
  std::vector<std::unique_ptr<Policy>> trackers;
  std::vector<Policy*> ptrs;
  for (int role = 0; role < 4; ++role) {
    trackers.push_back(make_team_pong_tracker(*game, role));
    ptrs.push_back(trackers.back().get());
  }
  const auto trace = run_episode(*game, ptrs, 21);
  CHECK(trace.num_steps() == 400);
  CHECK(trace.return_raw == std::vector<double>{0.0, 0.0, 0.0, 0.0});
}

TEST_CASE("team_pong: points pay both teammates equally") {
  auto game = create_game("team_pong", "{}");
  const auto seed = find_seed([&](std::uint64_t s) {
    return static_cast<int>(first_obs(*game, s, 0).frame[7]) != 0;  // vy != 0
  });
  std::vector<std::unique_ptr<Policy>> noops;
  std::vector<Policy*> ptrs;
  for (int role = 0; role < 4; ++role) {
    noops.push_back(std::make_unique<ScriptPolicy>(
        std::vector<Action>{}, nullptr, Action::of(TeamPong::kNoop)));
    ptrs.push_back(noops.back().get());
  }
  const auto trace = run_episode(*game, ptrs, seed);
  int scored_steps = 0;
  for (const auto& s : trace.steps) {
    if (s.rewards[0] == 0.0) {
      CHECK(s.rewards == std::vector<double>{0.0, 0.0, 0.0, 0.0});
      continue;
    }
    ++scored_steps;
    CHECK(std::abs(s.rewards[0]) == 1.0);
    CHECK(s.rewards[0] == s.rewards[1]);
    CHECK(s.rewards[2] == s.rewards[3]);
    CHECK(s.rewards[0] == -s.rewards[2]);
  }
  CHECK(scored_steps > 0);
}

TEST_CASE("team_pong: cooperative flag flows through the registry") {
  auto comp = create_game("team_pong", "{}");
  CHECK(comp->mode() == GameMode::kCompetitive);
  auto coop = create_game("team_pong", R"({"mode":"cooperative_pair"})");
  CHECK(coop->mode() == GameMode::kCooperativePair);
  CHECK_THROWS_AS(create_game("team_pong", R"({"mode":"solo"})"),
                  std::invalid_argument);
}

TEST_CASE("team_pong: teammate and opponent coordinates are addressable") {
  auto game = create_game("team_pong", "{}");
  const auto obs = first_obs(*game, 1, /*role=*/1);  // left front
  CHECK(game->tracked_coords(obs, 1) == std::vector<double>{obs.frame[0]});
  CHECK(game->tracked_coords(obs, 0) == std::vector<double>{obs.frame[1]});
  CHECK(game->tracked_coords(obs, 3) == std::vector<double>{obs.frame[2]});
  CHECK(game->tracked_coords(obs, 2) == std::vector<double>{obs.frame[3]});
}

namespace {

Action toward_landmark(const Observation& obs, double move_scale) {
  const double dx = obs.frame[4] - obs.frame[0];
  const double dy = obs.frame[5] - obs.frame[1];
  auto clamp1 = [](double v) { return std::clamp(v, -1.0, 1.0); };
  return Action::of({clamp1(dx / move_scale), clamp1(dy / move_scale)});
}

Action toward_other(const Observation& obs, double move_scale) {
  const double dx = obs.frame[2] - obs.frame[0];
  const double dy = obs.frame[3] - obs.frame[1];
  auto clamp1 = [](double v) { return std::clamp(v, -1.0, 1.0); };
  return Action::of({clamp1(dx / move_scale), clamp1(dy / move_scale)});
}

}  // namespace

TEST_CASE("push_point: walking to the landmark drives the reward to zero") {
  auto game = create_game("push_point", "{}");
  const auto seed = find_seed([&](std::uint64_t s) {
    const auto o = first_obs(*game, s, 0);
    const double datt = std::hypot(o.frame[2] - o.frame[0], o.frame[3] - o.frame[1]);
    const double dlm = std::hypot(o.frame[4] - o.frame[0], o.frame[5] - o.frame[1]);
    const double datt_lm =
        std::hypot(o.frame[2] - o.frame[4], o.frame[3] - o.frame[5]);
    // datt_lm > dlm + contact_radius keeps the walker's whole path (distance
    // to the landmark only shrinks) clear of the idle attacker.
    return datt > 0.6 && dlm > 0.3 && dlm < 0.45 && datt_lm > dlm + 0.13;
  });
  RecorderPolicy walker(nullptr, [&](const Observation& o) {
    return toward_landmark(o, 0.1);
  });
  ScriptPolicy still({}, nullptr, Action::of({0.0, 0.0}));
  const auto trace = run_episode(*game, {&walker, &still}, seed);
  for (std::size_t t = 1; t < trace.steps.size(); ++t) {
    CHECK(trace.steps[t].rewards[0] >= trace.steps[t - 1].rewards[0] - 1e-9);
    CHECK(trace.steps[t].rewards[1] ==
          doctest::Approx(-trace.steps[t].rewards[0]));
  }
  CHECK(trace.steps.back().rewards[0] >= -0.02);
}

TEST_CASE("push_point: contact shoves the defender out to the radius") {
  auto game = create_game("push_point", "{}");
  const auto seed = find_seed([&](std::uint64_t s) {
    const auto o = first_obs(*game, s, 0);
    const double datt = std::hypot(o.frame[2] - o.frame[0], o.frame[3] - o.frame[1]);
    auto mid = [](double v) { return v > 0.3 && v < 0.7; };
    return datt < 0.3 && datt > 0.13 && mid(o.frame[0]) && mid(o.frame[1]) &&
           mid(o.frame[2]) && mid(o.frame[3]);
  });
  ScriptPolicy still({}, nullptr, Action::of({0.0, 0.0}));
  RecorderPolicy chaser(nullptr, [&](const Observation& o) {
    return toward_other(o, 0.1);
  });
  const auto trace =
      run_episode(*game, {&still, &chaser}, seed, {},
                  EpisodeOptions{.step_cap_override = 10, .verbose_frames = true});

  bool contact = false;
  for (std::size_t t = 1; t < trace.frames.size() && !contact; ++t) {
    const auto& f = trace.frames[t][0];
    const double d = std::hypot(f[2] - f[0], f[3] - f[1]);
    CHECK(d >= 0.12 - 1e-9);
    if (d < 0.12 + 1e-9) contact = true;
  }
  CHECK(contact);
}

TEST_CASE("push_point: interior moves are recovered exactly from deltas") {
  auto game = create_game("push_point", "{}");
  const auto seed = find_seed([&](std::uint64_t s) {
    const auto o = first_obs(*game, s, 0);
    const double datt = std::hypot(o.frame[2] - o.frame[0], o.frame[3] - o.frame[1]);
    auto mid = [](double v) { return v > 0.2 && v < 0.8; };
    return datt > 0.5 && mid(o.frame[0]) && mid(o.frame[1]);
  });
  ScriptPolicy mover({Action::of({0.3, -0.4})}, nullptr, Action::of({0.0, 0.0}));
  RecorderPolicy rec(&mover);
  ScriptPolicy still({}, nullptr, Action::of({0.0, 0.0}));
  (void)run_episode(*game, {&rec, &still}, seed,
                    {}, EpisodeOptions{.step_cap_override = 2});

  REQUIRE(rec.seen.size() == 2);
  REQUIRE(game->window_valid(rec.seen[0], rec.seen[1]));
  const auto a = game->tracked_coords(rec.seen[0], 0);
  const auto b = game->tracked_coords(rec.seen[1], 0);
  const std::vector<double> delta = {b[0] - a[0], b[1] - a[1]};
  const Action inferred = game->action_from_coord_delta(delta);
  REQUIRE(inferred.is_continuous());
  CHECK(inferred.box[0] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(inferred.box[1] == doctest::Approx(-0.4).epsilon(1e-12));
}

TEST_CASE("push_point and mini_pong config validation") {
  CHECK_THROWS_AS(create_game("push_point", R"({"move_scale":0.0})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(create_game("mini_pong", R"({"paddle":9})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(create_game("team_pong", R"({"width":5})"),
                  std::invalid_argument);
}

TEST_CASE("registry lists games alphabetically") {
  const auto games = registered_games();
  REQUIRE(games.size() == 4);
  CHECK(std::is_sorted(games.begin(), games.end()));
  for (const auto& key : games) {
    auto game = create_game(key);
    CHECK(game->name() == key);
    CHECK(game->num_roles() == static_cast<int>(game->role_names().size()));
    CHECK(game->step_cap() > 0);
  }
}
