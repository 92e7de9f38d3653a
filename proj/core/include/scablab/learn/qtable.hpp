// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCABLAB_LEARN_QTABLE_HPP_
#define SCABLAB_LEARN_QTABLE_HPP_

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace scablab::learn {

// Sparse action-value table keyed by observation digests. Unvisited rows
// read as the initial value.
class QTable {
 public:
  explicit QTable(int num_actions, double initial_value = 0.0);

  int num_actions() const { return num_actions_; }
  double initial_value() const { return initial_value_; }

  double q(std::uint64_t key, int action) const;
  std::vector<double> row(std::uint64_t key) const;  // copy, defaults filled
  void set(std::uint64_t key, int action, double value);

  int visits(std::uint64_t key, int action) const;
  void add_visit(std::uint64_t key, int action);

  std::size_t num_rows() const { return rows_.size(); }
  const std::unordered_map<std::uint64_t, std::vector<double>>& rows() const {
    return rows_;
  }
  std::unordered_map<std::uint64_t, std::vector<double>>& rows() {
    return rows_;
  }

 private:
  int num_actions_;
  double initial_value_;
  std::unordered_map<std::uint64_t, std::vector<double>> rows_;
  std::unordered_map<std::uint64_t, std::vector<int>> visits_;
};

// One Q-learning backup:
//   Q(s,a) += alpha * (r + gamma * (1-done) * max_a' Q(s',a') - Q(s,a)).
// Returns the temporal-difference error before the update.
double q_update(QTable& table, std::uint64_t key, int action, double reward,
                std::uint64_t next_key, bool done, double alpha, double gamma);

}  // namespace scablab::learn

#endif  // SCABLAB_LEARN_QTABLE_HPP_
