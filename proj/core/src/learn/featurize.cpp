// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#include "scablab/learn/featurize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scablab/digest.hpp"
#include "scablab/envs/grid_duel.hpp"
#include "scablab/envs/mini_pong.hpp"
#include "scablab/envs/push_point.hpp"
#include "scablab/envs/team_pong.hpp"

namespace scablab::learn {

const Action& ActionCodec::decode(int index) const {
  if (index < 0 || index >= size()) {
    throw std::invalid_argument("codec: index out of range");
  }
  return actions_[static_cast<std::size_t>(index)];
}

int ActionCodec::encode(const Action& action, double tol) const {
  for (int i = 0; i < size(); ++i) {
    if (actions_match(actions_[static_cast<std::size_t>(i)], action, tol)) {
      return i;
    }
  }
  return -1;
}

ActionCodec ActionCodec::for_role(const MarkovGame& game, int role) {
  ActionCodec codec;
  const auto space = game.action_space(role);
  if (space.kind == ActionSpace::Kind::kDiscrete) {
    for (int i = 0; i < space.size(); ++i) codec.actions_.push_back(Action::of(i));
    return codec;
  }
  if (space.dim != 2) {
    throw std::invalid_argument("codec: continuous atoms support dim=2 only");
  }
  // Zero plus the 8 unit pushes. Exact zero first so it is the lowest-index
  // tie-break choice and a representable continuous noop.
  const double s = 1.0 / std::sqrt(2.0);
  codec.actions_ = {
      Action::of({0.0, 0.0}), Action::of({1.0, 0.0}),  Action::of({-1.0, 0.0}),
      Action::of({0.0, 1.0}), Action::of({0.0, -1.0}), Action::of({s, s}),
      Action::of({s, -s}),    Action::of({-s, s}),     Action::of({-s, -s}),
  };
  return codec;
}

std::uint64_t Featurizer::key(ObsWindow window) const {
  const auto f = features(window);
  return digest_doubles(f);
}

int effective_action_index(const MarkovGame& game, const ActionCodec& codec,
                           int target_role, const Observation& prev,
                           const Observation& cur) {
  if (!game.window_valid(prev, cur)) return codec.size();
  const auto before = game.tracked_coords(prev, target_role);
  const auto after = game.tracked_coords(cur, target_role);
  std::vector<double> delta(before.size());
  for (std::size_t i = 0; i < before.size(); ++i) delta[i] = after[i] - before[i];
  try {
    const Action inferred = game.action_from_coord_delta(delta);
    const int idx = codec.encode(inferred, 1e-6);
    return idx >= 0 ? idx : codec.size();
  } catch (const std::invalid_argument&) {
    return codec.size();
  }
}

namespace {

// Appends the trailing effective-action indices of `role` (newest last).
void append_lags(const MarkovGame& game, const ActionCodec& codec, int role,
                 ObsWindow window, int lag, std::vector<double>& out) {
  const int n = static_cast<int>(window.size());
  for (int back = lag; back >= 1; --back) {
    // Pair (n-1-back, n-back) is the effective action `back` steps ago.
    const int i = n - 1 - back;
    if (i < 0) {
      out.push_back(codec.size());
      continue;
    }
    out.push_back(effective_action_index(
        game, codec, role, window[static_cast<std::size_t>(i)],
        window[static_cast<std::size_t>(i + 1)]));
  }
}

int sgn(double v) { return v < 0.0 ? -1 : (v > 0.0 ? 1 : 0); }

double clipd(double v, double lo, double hi) {
  return v < lo ? lo : (v > hi ? hi : v);
}

class CompactFeaturizer : public Featurizer {
 public:
  CompactFeaturizer(const MarkovGame& game, int self_role, int partner_role,
                    FeatureSpec spec)
      : game_(game),
        self_role_(self_role),
        partner_role_(partner_role),
        spec_(spec),
        self_codec_(ActionCodec::for_role(game, self_role)),
        partner_codec_(ActionCodec::for_role(game, partner_role)) {}

  int dim() const override {
    return base_dim() + spec_.own_lag + spec_.partner_lag;
  }

  std::vector<double> features(ObsWindow window) const override {
    if (window.empty()) throw std::invalid_argument("featurize: empty window");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(dim()));
    base_features(window.back(), out);
    append_lags(game_, self_codec_, self_role_, window, spec_.own_lag, out);
    append_lags(game_, partner_codec_, partner_role_, window,
                spec_.partner_lag, out);
    return out;
  }

 protected:
  virtual int base_dim() const = 0;
  virtual void base_features(const Observation& obs,
                             std::vector<double>& out) const = 0;

  const MarkovGame& game_;
  int self_role_;
  int partner_role_;
  FeatureSpec spec_;
  ActionCodec self_codec_;
  ActionCodec partner_codec_;
};

class GridDuelFeaturizer final : public CompactFeaturizer {
 public:
  GridDuelFeaturizer(const envs::GridDuel& game, int self_role,
                     int partner_role, FeatureSpec spec)
      : CompactFeaturizer(game, self_role, partner_role, spec),
        board_(game.config().board_size) {}

 private:
  int base_dim() const override { return 7; }

  void base_features(const Observation& obs,
                     std::vector<double>& out) const override {
    const int b = board_;
    const std::size_t base = static_cast<std::size_t>(b * b);
    const int sr = static_cast<int>(obs.frame[base + 0]);
    const int sc = static_cast<int>(obs.frame[base + 1]);
    const int or_ = static_cast<int>(obs.frame[base + 2]);
    const int oc = static_cast<int>(obs.frame[base + 3]);
    // A cell is blocked if it is off-board, carries a trail, or holds the
    // opponent; moving into one loses the round.
    const int dr[4] = {-1, 1, 0, 0};
    const int dc[4] = {0, 0, -1, 1};
    for (int d = 0; d < 4; ++d) {
      const int r = sr + dr[d];
      const int c = sc + dc[d];
      bool blocked = r < 0 || r >= b || c < 0 || c >= b;
      if (!blocked) {
        blocked = obs.frame[static_cast<std::size_t>(r * b + c)] != 0.0;
      }
      out.push_back(blocked ? 1.0 : 0.0);
    }
    out.push_back(sgn(or_ - sr));
    out.push_back(sgn(oc - sc));
    // Nearest wall: 0=top 1=bottom 2=left 3=right, lowest index on ties.
    const int dist[4] = {sr, b - 1 - sr, sc, b - 1 - sc};
    int best = 0;
    for (int d = 1; d < 4; ++d) {
      if (dist[d] < dist[best]) best = d;
    }
    out.push_back(best);
  }

  int board_;
};

class PongFeaturizer final : public CompactFeaturizer {
 public:
  PongFeaturizer(const MarkovGame& game, int self_role, int partner_role,
                 FeatureSpec spec, int ball_x_slot, int max_paddle_y)
      : CompactFeaturizer(game, self_role, partner_role, spec),
        ball_x_slot_(ball_x_slot),
        max_paddle_y_(max_paddle_y) {}

 private:
  int base_dim() const override { return 6; }

  void base_features(const Observation& obs,
                     std::vector<double>& out) const override {
    const double self_y = game_.tracked_coords(obs, self_role_)[0];
    const double bx = obs.frame[static_cast<std::size_t>(ball_x_slot_)];
    const double by = obs.frame[static_cast<std::size_t>(ball_x_slot_ + 1)];
    const double vx = obs.frame[static_cast<std::size_t>(ball_x_slot_ + 2)];
    const double vy = obs.frame[static_cast<std::size_t>(ball_x_slot_ + 3)];
    out.push_back(clipd(by - self_y, -3.0, 3.0));
    out.push_back(self_y == 0 ? 1.0 : 0.0);
    out.push_back(self_y >= max_paddle_y_ ? 1.0 : 0.0);
    out.push_back(bx);
    out.push_back(vx);
    out.push_back(vy);
  }

  int ball_x_slot_;
  int max_paddle_y_;
};

class PushPointFeaturizer final : public CompactFeaturizer {
 public:
  PushPointFeaturizer(const envs::PushPoint& game, int self_role,
                      int partner_role, FeatureSpec spec)
      : CompactFeaturizer(game, self_role, partner_role, spec) {}

 private:
  int base_dim() const override { return 8; }

  void base_features(const Observation& obs,
                     std::vector<double>& out) const override {
    const double sx = obs.frame[0];
    const double sy = obs.frame[1];
    const double ox = obs.frame[2];
    const double oy = obs.frame[3];
    const double lx = obs.frame[4];
    const double ly = obs.frame[5];
    // Quantized so tabular keys stay exact: landmark offset in move-scale
    // steps (clipped), other-agent offset coarser, wall contact bits.
    out.push_back(clipd(std::round((lx - sx) / 0.1), -3.0, 3.0));
    out.push_back(clipd(std::round((ly - sy) / 0.1), -3.0, 3.0));
    out.push_back(clipd(std::round((ox - sx) / 0.2), -2.0, 2.0));
    out.push_back(clipd(std::round((oy - sy) / 0.2), -2.0, 2.0));
    out.push_back(sx < 0.05 ? 1.0 : 0.0);
    out.push_back(sx > 0.95 ? 1.0 : 0.0);
    out.push_back(sy < 0.05 ? 1.0 : 0.0);
    out.push_back(sy > 0.95 ? 1.0 : 0.0);
  }
};

class StackFeaturizer final : public Featurizer {
 public:
  StackFeaturizer(const MarkovGame& game, int self_role, int k_in)
      : game_(game), self_role_(self_role), k_in_(k_in) {
    if (k_in < 1) throw std::invalid_argument("featurize: k_in must be >= 1");
    RngStream probe(0, "featurize/probe");
    const auto state = game.initial_state(probe);
    frame_dim_ = static_cast<int>(game.observe(state, self_role).frame.size());
  }

  int dim() const override { return frame_dim_ * k_in_; }

  std::vector<double> features(ObsWindow window) const override {
    if (window.empty()) throw std::invalid_argument("featurize: empty window");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(dim()));
    const int n = static_cast<int>(window.size());
    for (int back = k_in_ - 1; back >= 0; --back) {
      const int i = std::max(0, n - 1 - back);
      const auto& f = window[static_cast<std::size_t>(i)].frame;
      if (static_cast<int>(f.size()) != frame_dim_) {
        throw std::invalid_argument("featurize: frame size changed");
      }
      out.insert(out.end(), f.begin(), f.end());
    }
    return out;
  }

 private:
  const MarkovGame& game_;
  int self_role_;
  int k_in_;
  int frame_dim_ = 0;
};

}  // namespace

std::unique_ptr<Featurizer> make_featurizer(const MarkovGame& game,
                                            int self_role, int partner_role,
                                            const FeatureSpec& spec) {
  if (const auto* g = dynamic_cast<const envs::GridDuel*>(&game)) {
    return std::make_unique<GridDuelFeaturizer>(*g, self_role, partner_role,
                                                spec);
  }
  if (const auto* g = dynamic_cast<const envs::MiniPong*>(&game)) {
    return std::make_unique<PongFeaturizer>(
        game, self_role, partner_role, spec, /*ball_x_slot=*/2,
        g->config().height - g->config().paddle);
  }
  if (const auto* g = dynamic_cast<const envs::TeamPong*>(&game)) {
    return std::make_unique<PongFeaturizer>(
        game, self_role, partner_role, spec, /*ball_x_slot=*/4,
        g->config().height - g->config().paddle);
  }
  if (const auto* g = dynamic_cast<const envs::PushPoint*>(&game)) {
    return std::make_unique<PushPointFeaturizer>(*g, self_role, partner_role,
                                                 spec);
  }
  throw std::invalid_argument("featurize: no compact featurizer for " +
                              game.name());
}

std::unique_ptr<Featurizer> make_stack_featurizer(const MarkovGame& game,
                                                  int self_role, int k_in) {
  return std::make_unique<StackFeaturizer>(game, self_role, k_in);
}

}  // namespace scablab::learn
