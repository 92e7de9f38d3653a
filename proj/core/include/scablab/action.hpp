// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCABLAB_ACTION_HPP_
#define SCABLAB_ACTION_HPP_

#include <string>
#include <vector>

namespace scablab {

// A discrete action is an index into a role's alphabet; a continuous action
// is a coordinate vector. `box` nonempty marks the continuous case.
struct Action {
  int discrete = 0;
  std::vector<double> box;

  bool is_continuous() const { return !box.empty(); }

  static Action of(int index) { return Action{index, {}}; }
  static Action of(std::vector<double> coords) {
    return Action{0, std::move(coords)};
  }
};

bool operator==(const Action& a, const Action& b);

// Exact match for discrete actions; sup-norm match within `tolerance` for
// continuous ones. Mixed kinds never match.
bool actions_match(const Action& a, const Action& b, double tolerance);

struct ActionSpace {
  enum class Kind { kDiscrete, kContinuous };

  Kind kind = Kind::kDiscrete;
  std::vector<std::string> labels;  // discrete alphabet, index order
  int dim = 0;                      // continuous dimension
  double low = -1.0;
  double high = 1.0;

  static ActionSpace discrete(std::vector<std::string> labels);
  static ActionSpace continuous(int dim, double low, double high);

  int size() const { return static_cast<int>(labels.size()); }
  bool contains(const Action& a) const;
};

}  // namespace scablab

#endif  // SCABLAB_ACTION_HPP_
