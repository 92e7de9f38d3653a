// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#include "scablab/game.hpp"

#include <stdexcept>

namespace scablab {

double discounted_return(std::span<const double> rewards,
                         const DiscountSpec& discount) {
  if (!(discount.gamma >= 0.0 && discount.gamma < 1.0)) {
    throw std::invalid_argument("discounted_return: gamma must be in [0, 1)");
  }
  double acc = 0.0;
  double g = 1.0;
  for (double r : rewards) {
    acc += g * r;
    g *= discount.gamma;
  }
  return acc;
}

Action MarkovGame::action_from_coord_delta(std::span<const double>) const {
  throw std::logic_error(name() + ": action_from_coord_delta not supported");
}

bool MarkovGame::window_valid(const Observation& prev,
                              const Observation& cur) const {
  return cur.step == prev.step + 1;
}

int role_index(const MarkovGame& game, const std::string& role_name) {
  const auto& names = game.role_names();
  for (int i = 0; i < static_cast<int>(names.size()); ++i) {
    if (names[static_cast<std::size_t>(i)] == role_name) return i;
  }
  throw std::invalid_argument(game.name() + ": unknown role " + role_name);
}

}  // namespace scablab
