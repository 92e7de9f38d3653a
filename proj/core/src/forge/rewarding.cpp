// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#include "scablab/forge/rewarding.hpp"

#include <memory>
#include <stdexcept>
#include <utility>

#include "scablab/episode.hpp"
#include "scablab/envs/registry.hpp"
#include "scablab/rng.hpp"

namespace scablab::forge {
namespace {

// One warm-up length per episode, shared by every learning seat so the
// random prefix really is a joint rollout and not two desynchronized ones.
struct WarmStart {
  RngStream rng;
  std::uint64_t steps = 0;

  explicit WarmStart(RngStream stream) : rng(stream) {}
  void next_episode(int step_cap) {
    steps = rng.next_below(static_cast<std::uint64_t>(step_cap / 2) + 1);
  }
};

// Plays uniformly at random for the first `warm.steps` steps of each
// episode, then hands over to the wrapped policy.
class WarmPolicy final : public Policy {
 public:
  WarmPolicy(Policy* inner, const ActionSpace& space, const WarmStart* warm)
      : inner_(inner), random_(envs::make_random_policy(space)), warm_(warm) {}

  void begin_episode() override {
    inner_->begin_episode();
    random_->begin_episode();
  }

  Action act(ObsWindow window, RngStream& rng) override {
    const auto step = static_cast<std::uint64_t>(window.back().step);
    if (step < warm_->steps) return random_->act(window, rng);
    return inner_->act(window, rng);
  }

 private:
  Policy* inner_;
  std::unique_ptr<Policy> random_;
  const WarmStart* warm_;
};

Transition with_reward(const Transition& t, double reward) {
  Transition out = t;
  out.reward = reward;
  return out;
}

RewardingResult train_signed(const MarkovGame& game, int attacker_role,
                             int victim_role, double proxy_sign,
                             const learn::LearnerConfig& attacker_cfg,
                             const learn::LearnerConfig& proxy_cfg,
                             const RewardingConfig& rcfg, std::uint64_t seed,
                             const std::vector<Policy*>& fixed_seats) {
  rcfg.validate();
  const int n = game.num_roles();
  if (attacker_role == victim_role || attacker_role < 0 || victim_role < 0 ||
      attacker_role >= n || victim_role >= n) {
    throw std::invalid_argument("rewarding: bad attacker/victim roles");
  }
  if (n > 2 && static_cast<int>(fixed_seats.size()) != n) {
    throw std::invalid_argument(
        "rewarding: games with extra seats need a fixed policy per seat");
  }
  for (int r = 0; r < n && !fixed_seats.empty(); ++r) {
    if (r != attacker_role && r != victim_role && fixed_seats[r] == nullptr) {
      throw std::invalid_argument("rewarding: missing fixed policy for seat " +
                                  std::to_string(r));
    }
  }

  auto attacker = learn::make_learner(game, attacker_role, victim_role,
                                      attacker_cfg,
                                      derive_seed(seed, "rewarding/attacker"));
  std::vector<std::unique_ptr<learn::Learner>> proxies;
  proxies.reserve(static_cast<std::size_t>(rcfg.n_opponents));
  for (int p = 0; p < rcfg.n_opponents; ++p) {
    proxies.push_back(learn::make_learner(
        game, victim_role, attacker_role, proxy_cfg,
        derive_seed(seed, "rewarding/proxy", static_cast<std::uint64_t>(p))));
  }

  WarmStart warm(RngStream(seed, "rewarding/warmup"));
  RewardingResult result;
  std::uint64_t episode_counter = 0;
  std::int64_t attacker_steps = 0;
  int block = 0;

  while (attacker_steps < rcfg.total_steps) {
    learn::Learner& proxy = *proxies[static_cast<std::size_t>(
        block % rcfg.n_opponents)];
    const std::int64_t block_target =
        std::min(rcfg.total_steps, attacker_steps + rcfg.alternation_period);

    while (attacker_steps < block_target) {
      warm.next_episode(game.step_cap());
      WarmPolicy att_seat(&attacker->policy(),
                          game.action_space(attacker_role), &warm);
      WarmPolicy proxy_seat(&proxy.policy(), game.action_space(victim_role),
                            &warm);

      std::vector<Policy*> seats(static_cast<std::size_t>(n), nullptr);
      for (int r = 0; r < n; ++r) {
        if (r == attacker_role) {
          seats[static_cast<std::size_t>(r)] = &att_seat;
        } else if (r == victim_role) {
          seats[static_cast<std::size_t>(r)] = &proxy_seat;
        } else {
          seats[static_cast<std::size_t>(r)] = fixed_seats[static_cast<std::size_t>(r)];
        }
      }

      EpisodeHooks hooks;
      hooks.on_transition = [&](const Transition& t) {
        const auto step = static_cast<std::uint64_t>(t.before.back().step);
        if (step < warm.steps) return;  // random prefix: nobody learns
        if (t.role == attacker_role) {
          // Zero-sum (resp. shared-reward) identity: the victim's payoff
          // seen from the attacker's seat is -reward (resp. reward), so
          // flipping the sign pays the attacker for the victim scoring
          // and the penalizer for the team bleeding.
          attacker->observe(with_reward(t, -t.reward));
          ++attacker_steps;
        } else if (t.role == victim_role) {
          proxy.observe(with_reward(t, proxy_sign * t.reward));
        }
      };

      run_episode(game, seats,
                  derive_seed(seed, "rewarding/episode", episode_counter++),
                  hooks);
      attacker->end_episode();
      proxy.end_episode();
    }
    result.loss_trail.push_back(attacker->last_loss());
    ++block;
  }

  result.checkpoint = attacker->checkpoint_json();
  return result;
}

}  // namespace

void RewardingConfig::validate() const {
  if (n_opponents < 1) throw std::invalid_argument("rewarding: n_opponents < 1");
  if (alternation_period < 1) {
    throw std::invalid_argument("rewarding: alternation_period < 1");
  }
  if (total_steps < 1) throw std::invalid_argument("rewarding: total_steps < 1");
}

RewardingResult train_rewarding_policy(const MarkovGame& game,
                                       int attacker_role, int victim_role,
                                       const learn::LearnerConfig& attacker_cfg,
                                       const learn::LearnerConfig& proxy_cfg,
                                       const RewardingConfig& rcfg,
                                       std::uint64_t seed,
                                       const std::vector<Policy*>& fixed_seats) {
  if (game.mode() != GameMode::kCompetitive) {
    throw std::invalid_argument(
        "rewarding: competitive game required; use train_penalizing_policy");
  }
  // Proxy minimizes its own return: it is being paid to dodge the bribe.
  return train_signed(game, attacker_role, victim_role, /*proxy_sign=*/-1.0,
                      attacker_cfg, proxy_cfg, rcfg, seed, fixed_seats);
}

RewardingResult train_penalizing_policy(const MarkovGame& game,
                                        int attacker_role, int victim_role,
                                        const learn::LearnerConfig& attacker_cfg,
                                        const learn::LearnerConfig& proxy_cfg,
                                        const RewardingConfig& rcfg,
                                        std::uint64_t seed,
                                        const std::vector<Policy*>& fixed_seats) {
  if (game.mode() != GameMode::kCooperativePair) {
    throw std::invalid_argument(
        "penalizing: cooperative game required; use train_rewarding_policy");
  }
  // Proxy plays the game straight (maximizes the shared return) while the
  // attacker learns how to tank it.
  return train_signed(game, attacker_role, victim_role, /*proxy_sign=*/1.0,
                      attacker_cfg, proxy_cfg, rcfg, seed, fixed_seats);
}

}  // namespace scablab::forge
