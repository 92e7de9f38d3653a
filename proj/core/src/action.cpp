// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#include "scablab/action.hpp"

#include <cmath>

namespace scablab {

bool operator==(const Action& a, const Action& b) {
  return a.discrete == b.discrete && a.box == b.box;
}

bool actions_match(const Action& a, const Action& b, double tolerance) {
  if (a.is_continuous() != b.is_continuous()) return false;
  if (!a.is_continuous()) return a.discrete == b.discrete;
  if (a.box.size() != b.box.size()) return false;
  for (std::size_t i = 0; i < a.box.size(); ++i) {
    if (std::abs(a.box[i] - b.box[i]) > tolerance) return false;
  }
  return true;
}

ActionSpace ActionSpace::discrete(std::vector<std::string> labels) {
  ActionSpace s;
  s.kind = Kind::kDiscrete;
  s.labels = std::move(labels);
  return s;
}

ActionSpace ActionSpace::continuous(int dim, double low, double high) {
  ActionSpace s;
  s.kind = Kind::kContinuous;
  s.dim = dim;
  s.low = low;
  s.high = high;
  return s;
}

bool ActionSpace::contains(const Action& a) const {
  if (kind == Kind::kDiscrete) {
    return !a.is_continuous() && a.discrete >= 0 && a.discrete < size();
  }
  if (static_cast<int>(a.box.size()) != dim) return false;
  for (double v : a.box) {
    if (!(v >= low && v <= high)) return false;
  }
  return true;
}

}  // namespace scablab
