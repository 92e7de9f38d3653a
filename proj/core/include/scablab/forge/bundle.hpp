// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCABLAB_FORGE_BUNDLE_HPP_
#define SCABLAB_FORGE_BUNDLE_HPP_

#include <cstdint>
#include <memory>
#include <string>

#include "scablab/attack/sequence.hpp"
#include "scablab/forge/detector.hpp"
#include "scablab/game.hpp"
#include "scablab/policy.hpp"

namespace scablab::forge {

// Attack-time knobs carried alongside the trained artifacts.
struct AttackConfig {
  double tip = 0.0;    // trigger injection probability per Winning entry
  double brt = 0.0;    // bribe budget: stop Rewarding once -sum gamma^i r > brt
  double gamma = 0.99; // discount used for the bribe accumulator
  void validate() const;
};

// Everything the attacker ships: the cover policy, the bribe (or sabotage)
// policy, the victim-action detector, the two action sequences, and the
// knobs. Checkpoints stay as opaque JSON so a bundle can be moved between
// processes without instantiating a game.
struct AttackerBundle {
  std::string game_name;
  int attacker_role = 1;
  int victim_role = 0;
  std::string rwd_kind;  // "rewarding" (competitive) | "penalizing" (cooperative)
  AttackConfig config;
  attack::ActionSequence trigger_seq;   // attacker actions, length h
  attack::ActionSequence backdoor_seq;  // victim actions, length g
  Detector detector;
  std::string std_checkpoint;
  std::string rwd_checkpoint;

  // Cross-checks the bundle against the game it is about to be deployed
  // in: name, roles, sequence membership, detector seat wiring, and that
  // the rwd flavor matches the game mode.
  void validate(const MarkovGame& game) const;

  std::unique_ptr<Policy> make_std_policy(const MarkovGame& game) const;
  std::unique_ptr<Policy> make_rwd_policy(const MarkovGame& game) const;
};

// On-disk layout: <dir>/std_policy.json, rwd_policy.json, detector.json,
// bundle_manifest.json. The manifest carries a digest over the three
// artifact files so tampering is detectable at load time.
void save_bundle(const AttackerBundle& bundle, const std::string& dir);
AttackerBundle load_bundle(const std::string& dir);

}  // namespace scablab::forge

#endif  // SCABLAB_FORGE_BUNDLE_HPP_
