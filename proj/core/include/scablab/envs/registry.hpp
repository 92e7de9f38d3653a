// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCABLAB_ENVS_REGISTRY_HPP_
#define SCABLAB_ENVS_REGISTRY_HPP_

#include <memory>
#include <string>
#include <vector>

#include "scablab/game.hpp"
#include "scablab/policy.hpp"

namespace scablab::envs {

// Instantiates a built-in game from its registry key and a JSON config
// object (text). Unknown keys and unknown config fields throw
// std::invalid_argument naming the offender and the known alternatives.
std::unique_ptr<MarkovGame> create_game(const std::string& key,
                                        const std::string& config_json = "{}");

std::vector<std::string> registered_games();

// Uniform random policy over a role's action space.
std::unique_ptr<Policy> make_random_policy(ActionSpace space);

// Emits a fixed list of actions, then falls back to a delegate (or noop-like
// fallback action if none). Handy for tests and trigger injection.
class ScriptPolicy : public Policy {
 public:
  ScriptPolicy(std::vector<Action> script, Policy* fallback,
               Action fallback_action = Action::of(0));
  Action act(ObsWindow window, RngStream& rng) override;
  void begin_episode() override { cursor_ = 0; }

 private:
  std::vector<Action> script_;
  Policy* fallback_;
  Action fallback_action_;
  std::size_t cursor_ = 0;
};

}  // namespace scablab::envs

#endif  // SCABLAB_ENVS_REGISTRY_HPP_
