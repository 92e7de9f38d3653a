// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#include "scablab/forge/bundle.hpp"

#include <filesystem>
#include <stdexcept>

#include "json.hpp"
#include "scablab/digest.hpp"
#include "scablab/learn/checkpoint.hpp"
#include "scablab/learn/learners.hpp"

namespace scablab::forge {
namespace {

using nlohmann::json;

constexpr int kManifestVersion = 1;

std::uint64_t artifact_digest(const AttackerBundle& b,
                              const std::string& detector_json) {
  // Length-prefixed concatenation so no pair of artifacts can collide by
  // shifting bytes across the boundary.
  std::string blob;
  for (const std::string* part :
       {&b.std_checkpoint, &b.rwd_checkpoint, &detector_json}) {
    blob += std::to_string(part->size());
    blob += ':';
    blob += *part;
  }
  return digest_string(blob);
}

std::string expected_rwd_kind(GameMode mode) {
  return mode == GameMode::kCompetitive ? "rewarding" : "penalizing";
}

}  // namespace

void AttackConfig::validate() const {
  if (!(tip >= 0.0 && tip <= 1.0)) {
    throw std::invalid_argument("attack config: tip must be in [0, 1]");
  }
  if (!(brt >= 0.0)) {
    throw std::invalid_argument("attack config: brt must be >= 0");
  }
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("attack config: gamma must be in (0, 1]");
  }
}

void AttackerBundle::validate(const MarkovGame& game) const {
  if (game.name() != game_name) {
    throw std::invalid_argument("bundle: built for game '" + game_name +
                                "', got '" + game.name() + "'");
  }
  const int n = game.num_roles();
  if (attacker_role < 0 || attacker_role >= n || victim_role < 0 ||
      victim_role >= n || attacker_role == victim_role) {
    throw std::invalid_argument("bundle: bad attacker/victim roles");
  }
  if (rwd_kind != expected_rwd_kind(game.mode())) {
    throw std::invalid_argument("bundle: rwd policy kind '" + rwd_kind +
                                "' does not match the game mode");
  }
  config.validate();
  trigger_seq.validate(game.action_space(attacker_role));
  backdoor_seq.validate(game.action_space(victim_role));
  if (detector.observer_role() != attacker_role ||
      detector.target_role() != victim_role) {
    throw std::invalid_argument("bundle: detector seat wiring mismatch");
  }
  if (std_checkpoint.empty() || rwd_checkpoint.empty()) {
    throw std::invalid_argument("bundle: missing policy checkpoint");
  }
}

std::unique_ptr<Policy> AttackerBundle::make_std_policy(
    const MarkovGame& game) const {
  return learn::policy_from_checkpoint(game, std_checkpoint);
}

std::unique_ptr<Policy> AttackerBundle::make_rwd_policy(
    const MarkovGame& game) const {
  return learn::policy_from_checkpoint(game, rwd_checkpoint);
}

void save_bundle(const AttackerBundle& bundle, const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  const std::string detector_json = bundle.detector.to_json();

  json manifest;
  manifest["version"] = kManifestVersion;
  manifest["game"] = bundle.game_name;
  manifest["attacker_role"] = bundle.attacker_role;
  manifest["victim_role"] = bundle.victim_role;
  manifest["rwd_kind"] = bundle.rwd_kind;
  manifest["config"] = {{"tip", bundle.config.tip},
                        {"brt", bundle.config.brt},
                        {"gamma", bundle.config.gamma}};
  manifest["trigger"] = json::parse(attack::sequence_to_json(bundle.trigger_seq));
  manifest["backdoor"] =
      json::parse(attack::sequence_to_json(bundle.backdoor_seq));
  manifest["detector_k"] = bundle.detector.k();
  manifest["artifact_digest"] =
      digest_hex(artifact_digest(bundle, detector_json));

  learn::write_text_file(root / "std_policy.json", bundle.std_checkpoint);
  learn::write_text_file(root / "rwd_policy.json", bundle.rwd_checkpoint);
  learn::write_text_file(root / "detector.json", detector_json);
  learn::write_text_file(root / "bundle_manifest.json", manifest.dump(2));
}

AttackerBundle load_bundle(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);

  json manifest;
  try {
    manifest = json::parse(learn::read_text_file(root / "bundle_manifest.json"));
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("bundle: bad manifest: ") + e.what());
  }
  if (manifest.value("version", -1) != kManifestVersion) {
    throw std::runtime_error("bundle: unsupported manifest version");
  }

  AttackerBundle b;
  try {
    b.game_name = manifest.at("game").get<std::string>();
    b.attacker_role = manifest.at("attacker_role").get<int>();
    b.victim_role = manifest.at("victim_role").get<int>();
    b.rwd_kind = manifest.at("rwd_kind").get<std::string>();
    const json& cfg = manifest.at("config");
    b.config.tip = cfg.at("tip").get<double>();
    b.config.brt = cfg.at("brt").get<double>();
    b.config.gamma = cfg.at("gamma").get<double>();
    b.trigger_seq = attack::sequence_from_json(manifest.at("trigger").dump());
    b.backdoor_seq = attack::sequence_from_json(manifest.at("backdoor").dump());
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("bundle: bad manifest: ") + e.what());
  }

  b.std_checkpoint = learn::read_text_file(root / "std_policy.json");
  b.rwd_checkpoint = learn::read_text_file(root / "rwd_policy.json");
  const std::string detector_json = learn::read_text_file(root / "detector.json");
  b.detector = Detector::from_json(detector_json);

  const std::string want =
      manifest.at("artifact_digest").get<std::string>();
  if (digest_hex(artifact_digest(b, detector_json)) != want) {
    throw std::runtime_error("bundle: artifact digest mismatch");
  }
  return b;
}

}  // namespace scablab::forge
