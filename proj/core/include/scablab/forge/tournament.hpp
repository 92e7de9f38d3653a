// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCABLAB_FORGE_TOURNAMENT_HPP_
#define SCABLAB_FORGE_TOURNAMENT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "scablab/learn/learners.hpp"

namespace scablab::forge {

struct TournamentConfig {
  int population = 10;
  std::int64_t steps_per_member = 20000;  // env steps for each member's seat
  int eval_episodes = 1000;               // total evaluation episodes a member plays
  void validate() const;                  // population >= 2 etc.
};

// Row with the best off-diagonal mean in a cross-evaluation matrix
// (means[i][j] = member i's return sparring member j). Lowest index on ties.
int select_best_member(const std::vector<std::vector<double>>& means);

struct TournamentResult {
  int winner = 0;
  std::string checkpoint;  // winning member's learner checkpoint for `role`
  std::vector<std::vector<double>> eval_means;
  std::vector<double> member_means;
};

// Population self-play: every member owns a learner per seat, trains while
// rotating through the other members as sparring partners, then each
// member's `role` seat is frozen and cross-evaluated against every other
// member; the highest mean return wins.
TournamentResult train_standard_policy(const MarkovGame& game, int role,
                                       const TournamentConfig& tcfg,
                                       const learn::LearnerConfig& lcfg,
                                       std::uint64_t seed);

}  // namespace scablab::forge

#endif  // SCABLAB_FORGE_TOURNAMENT_HPP_
