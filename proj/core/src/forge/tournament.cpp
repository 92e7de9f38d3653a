// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#include "scablab/forge/tournament.hpp"

#include <algorithm>
#include <stdexcept>

#include "scablab/episode.hpp"

namespace scablab::forge {

using learn::Learner;

void TournamentConfig::validate() const {
  if (population < 2) {
    throw std::invalid_argument("tournament: population must be >= 2");
  }
  if (steps_per_member < 1) {
    throw std::invalid_argument("tournament: steps_per_member must be >= 1");
  }
  if (eval_episodes < 1) {
    throw std::invalid_argument("tournament: eval_episodes must be >= 1");
  }
}

int select_best_member(const std::vector<std::vector<double>>& means) {
  const int p = static_cast<int>(means.size());
  if (p < 2) throw std::invalid_argument("select_best_member: need >= 2 rows");
  int best = -1;
  double best_mean = 0.0;
  for (int i = 0; i < p; ++i) {
    if (static_cast<int>(means[static_cast<std::size_t>(i)].size()) != p) {
      throw std::invalid_argument("select_best_member: ragged matrix");
    }
    double sum = 0.0;
    for (int j = 0; j < p; ++j) {
      if (j != i) sum += means[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    const double mean = sum / static_cast<double>(p - 1);
    if (best < 0 || mean > best_mean) {
      best = i;
      best_mean = mean;
    }
  }
  return best;
}

namespace {

// Seat partner used for lag features: the other half of a pair. Holds for
// the two-role games (opponent) and team_pong (teammate).
int partner_of(int role) { return role ^ 1; }

void run_training_episode(const MarkovGame& game,
                          const std::vector<Policy*>& seats,
                          const std::vector<Learner*>& observers,
                          std::uint64_t seed) {
  EpisodeHooks hooks;
  hooks.on_transition = [&](const Transition& t) {
    Learner* learner = observers[static_cast<std::size_t>(t.role)];
    if (learner != nullptr) learner->observe(t);
  };
  run_episode(game, seats, seed, hooks);
  for (Learner* learner : observers) {
    if (learner != nullptr) learner->end_episode();
  }
}

}  // namespace

TournamentResult train_standard_policy(const MarkovGame& game, int role,
                                       const TournamentConfig& tcfg,
                                       const learn::LearnerConfig& lcfg,
                                       std::uint64_t seed) {
  tcfg.validate();
  const int num_roles = game.num_roles();
  if (num_roles < 2) {
    throw std::invalid_argument("tournament: game needs >= 2 roles");
  }
  if (role < 0 || role >= num_roles) {
    throw std::invalid_argument("tournament: role out of range");
  }

  const int p = tcfg.population;
  std::vector<std::vector<std::unique_ptr<Learner>>> members(
      static_cast<std::size_t>(p));
  for (int m = 0; m < p; ++m) {
    for (int r = 0; r < num_roles; ++r) {
      members[static_cast<std::size_t>(m)].push_back(learn::make_learner(
          game, r, partner_of(r), lcfg,
          derive_seed(seed, "tournament/member",
                      static_cast<std::uint64_t>(m * num_roles + r))));
    }
  }

  // Round-based training. Each round freezes everyone, then every member
  // alternates self-play episodes (all its seats learn) with cross-play
  // against the frozen snapshots (only its `role` seat learns). Snapshots
  // refresh between rounds, so member updates never interleave.
  const std::int64_t round_quota =
      std::max<std::int64_t>(1, tcfg.steps_per_member / 8);
  std::uint64_t episode = 0;
  std::uint64_t cross_count = 0;
  auto done = [&](int m) {
    return members[static_cast<std::size_t>(m)][static_cast<std::size_t>(role)]
               ->steps_seen() >= tcfg.steps_per_member;
  };
  while (true) {
    bool all_done = true;
    for (int m = 0; m < p; ++m) all_done = all_done && done(m);
    if (all_done) break;

    std::vector<std::vector<std::unique_ptr<Policy>>> frozen(
        static_cast<std::size_t>(p));
    for (int m = 0; m < p; ++m) {
      for (int r = 0; r < num_roles; ++r) {
        frozen[static_cast<std::size_t>(m)].push_back(
            members[static_cast<std::size_t>(m)][static_cast<std::size_t>(r)]
                ->snapshot());
      }
    }

    for (int m = 0; m < p; ++m) {
      if (done(m)) continue;
      auto& mine = members[static_cast<std::size_t>(m)];
      const std::int64_t target =
          std::min(tcfg.steps_per_member,
                   mine[static_cast<std::size_t>(role)]->steps_seen() +
                       round_quota);
      bool self_play = true;
      while (mine[static_cast<std::size_t>(role)]->steps_seen() < target) {
        std::vector<Policy*> seats(static_cast<std::size_t>(num_roles));
        std::vector<Learner*> observers(static_cast<std::size_t>(num_roles),
                                        nullptr);
        if (self_play) {
          for (int r = 0; r < num_roles; ++r) {
            seats[static_cast<std::size_t>(r)] =
                &mine[static_cast<std::size_t>(r)]->policy();
            observers[static_cast<std::size_t>(r)] =
                mine[static_cast<std::size_t>(r)].get();
          }
        } else {
          const int opp =
              (m + 1 + static_cast<int>(cross_count++ % (p - 1))) % p;
          for (int r = 0; r < num_roles; ++r) {
            seats[static_cast<std::size_t>(r)] =
                frozen[static_cast<std::size_t>(opp)][static_cast<std::size_t>(r)]
                    .get();
          }
          seats[static_cast<std::size_t>(role)] =
              &mine[static_cast<std::size_t>(role)]->policy();
          observers[static_cast<std::size_t>(role)] =
              mine[static_cast<std::size_t>(role)].get();
        }
        run_training_episode(game, seats, observers,
                             derive_seed(seed, "tournament/train", episode++));
        self_play = !self_play;
      }
    }
  }

  // Cross-evaluation on frozen snapshots: member i's `role` seat against
  // member j's remaining seats.
  std::vector<std::vector<std::unique_ptr<Policy>>> snap(
      static_cast<std::size_t>(p));
  for (int m = 0; m < p; ++m) {
    for (int r = 0; r < num_roles; ++r) {
      snap[static_cast<std::size_t>(m)].push_back(
          members[static_cast<std::size_t>(m)][static_cast<std::size_t>(r)]
              ->snapshot());
    }
  }
  const int per_pair = std::max(1, tcfg.eval_episodes / (p - 1));
  TournamentResult result;
  result.eval_means.assign(static_cast<std::size_t>(p),
                           std::vector<double>(static_cast<std::size_t>(p), 0.0));
  std::uint64_t eval_episode = 0;
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      if (j == i) continue;
      double sum = 0.0;
      for (int e = 0; e < per_pair; ++e) {
        std::vector<Policy*> seats(static_cast<std::size_t>(num_roles));
        for (int r = 0; r < num_roles; ++r) {
          seats[static_cast<std::size_t>(r)] =
              snap[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)].get();
        }
        seats[static_cast<std::size_t>(role)] =
            snap[static_cast<std::size_t>(i)][static_cast<std::size_t>(role)].get();
        const auto trace = run_episode(
            game, seats, derive_seed(seed, "tournament/eval", eval_episode++));
        sum += trace.return_raw[static_cast<std::size_t>(role)];
      }
      result.eval_means[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          sum / static_cast<double>(per_pair);
    }
  }
  result.winner = select_best_member(result.eval_means);
  result.member_means.assign(static_cast<std::size_t>(p), 0.0);
  for (int i = 0; i < p; ++i) {
    double sum = 0.0;
    for (int j = 0; j < p; ++j) {
      if (j != i) {
        sum += result.eval_means[static_cast<std::size_t>(i)]
                                [static_cast<std::size_t>(j)];
      }
    }
    result.member_means[static_cast<std::size_t>(i)] =
        sum / static_cast<double>(p - 1);
  }
  result.checkpoint = members[static_cast<std::size_t>(result.winner)]
                             [static_cast<std::size_t>(role)]
                                 ->checkpoint_json();
  return result;
}

}  // namespace scablab::forge
