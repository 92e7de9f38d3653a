// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCABLAB_LEARN_FEATURIZE_HPP_
#define SCABLAB_LEARN_FEATURIZE_HPP_

#include <memory>
#include <vector>

#include "scablab/game.hpp"

namespace scablab::learn {

// Maps a learner's discrete head index to a playable game action. Discrete
// games use the identity; continuous games use a fixed atom set that
// includes the exact zero action and the axis/diagonal unit pushes.
class ActionCodec {
 public:
  static ActionCodec for_role(const MarkovGame& game, int role);

  int size() const { return static_cast<int>(actions_.size()); }
  const Action& decode(int index) const;
  // Index of the matching action, or -1. Continuous actions match the
  // nearest atom within `tol` in sup-norm.
  int encode(const Action& action, double tol = 1e-9) const;

  const std::vector<Action>& actions() const { return actions_; }

 private:
  std::vector<Action> actions_;
};

// Turns an observation window into a fixed-length feature vector. Tabular
// learners key rows on the digest of the same vector, so per-game features
// are integer-valued (continuous games quantize). Besides the current
// frame summary, features encode the recent *effective* actions of this
// role and of a designated partner role, both inferred from tracked
// coordinate deltas exactly as the action detector sees them.
class Featurizer {
 public:
  virtual ~Featurizer() = default;
  virtual int dim() const = 0;
  virtual std::vector<double> features(ObsWindow window) const = 0;
  std::uint64_t key(ObsWindow window) const;
};

struct FeatureSpec {
  int own_lag = 2;      // trailing own effective actions
  int partner_lag = 3;  // trailing partner effective actions
};

// Compact hand-built features for the built-in games: local geometry the
// role needs to play plus the lag encodings above.
std::unique_ptr<Featurizer> make_featurizer(const MarkovGame& game,
                                            int self_role, int partner_role,
                                            const FeatureSpec& spec = {});

// Generic fallback: the last k_in frames concatenated, padded by repeating
// the oldest frame.
std::unique_ptr<Featurizer> make_stack_featurizer(const MarkovGame& game,
                                                  int self_role, int k_in = 4);

// Effective action of `target_role` between the last two observations of
// `window`, as an index into that role's codec; codec.size() encodes
// "unknown" (short or invalid window, or unmappable delta).
int effective_action_index(const MarkovGame& game, const ActionCodec& codec,
                           int target_role, const Observation& prev,
                           const Observation& cur);

}  // namespace scablab::learn

#endif  // SCABLAB_LEARN_FEATURIZE_HPP_
