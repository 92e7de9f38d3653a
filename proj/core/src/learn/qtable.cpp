// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#include "scablab/learn/qtable.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scablab::learn {

QTable::QTable(int num_actions, double initial_value)
    : num_actions_(num_actions), initial_value_(initial_value) {
  if (num_actions < 1) throw std::invalid_argument("qtable: need >= 1 action");
}

double QTable::q(std::uint64_t key, int action) const {
  if (action < 0 || action >= num_actions_) {
    throw std::invalid_argument("qtable: action out of range");
  }
  const auto it = rows_.find(key);
  if (it == rows_.end()) return initial_value_;
  return it->second[static_cast<std::size_t>(action)];
}

std::vector<double> QTable::row(std::uint64_t key) const {
  const auto it = rows_.find(key);
  if (it == rows_.end()) {
    return std::vector<double>(static_cast<std::size_t>(num_actions_),
                               initial_value_);
  }
  return it->second;
}

void QTable::set(std::uint64_t key, int action, double value) {
  if (action < 0 || action >= num_actions_) {
    throw std::invalid_argument("qtable: action out of range");
  }
  if (!std::isfinite(value)) {
    throw std::invalid_argument("qtable: non-finite value");
  }
  auto it = rows_.find(key);
  if (it == rows_.end()) {
    it = rows_
             .emplace(key, std::vector<double>(
                               static_cast<std::size_t>(num_actions_),
                               initial_value_))
             .first;
  }
  it->second[static_cast<std::size_t>(action)] = value;
}

int QTable::visits(std::uint64_t key, int action) const {
  const auto it = visits_.find(key);
  if (it == visits_.end()) return 0;
  return it->second[static_cast<std::size_t>(action)];
}

void QTable::add_visit(std::uint64_t key, int action) {
  auto it = visits_.find(key);
  if (it == visits_.end()) {
    it = visits_
             .emplace(key, std::vector<int>(
                               static_cast<std::size_t>(num_actions_), 0))
             .first;
  }
  it->second[static_cast<std::size_t>(action)] += 1;
}

double q_update(QTable& table, std::uint64_t key, int action, double reward,
                std::uint64_t next_key, bool done, double alpha,
                double gamma) {
  if (!std::isfinite(reward)) {
    throw std::invalid_argument("q_update: non-finite reward");
  }
  double bootstrap = 0.0;
  if (!done) {
    const auto next_row = table.row(next_key);
    bootstrap = *std::max_element(next_row.begin(), next_row.end());
  }
  const double current = table.q(key, action);
  const double td = reward + gamma * bootstrap - current;
  table.set(key, action, current + alpha * td);
  table.add_visit(key, action);
  return td;
}

}  // namespace scablab::learn
