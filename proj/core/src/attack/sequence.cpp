// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#include "scablab/attack/sequence.hpp"

#include <json.hpp>

#include <stdexcept>

namespace scablab::attack {

using nlohmann::json;

void ActionSequence::validate(const ActionSpace& space) const {
  if (actions.empty()) {
    throw std::invalid_argument("action sequence: empty");
  }
  const bool cont = actions.front().is_continuous();
  for (const auto& a : actions) {
    if (a.is_continuous() != cont) {
      throw std::invalid_argument("action sequence: mixed action kinds");
    }
    if (!space.contains(a)) {
      throw std::invalid_argument("action sequence: element outside space");
    }
  }
  if (cont && tolerance <= 0.0) {
    throw std::invalid_argument(
        "action sequence: continuous sequences need a positive tolerance");
  }
  if (!cont && tolerance != 0.0) {
    throw std::invalid_argument(
        "action sequence: discrete sequences take no tolerance");
  }
}

CompletionCheck check_completion(std::span<const Action> inferred,
                                 const ActionSequence& backdoor) {
  if (inferred.size() > backdoor.actions.size()) {
    throw std::invalid_argument("check_completion: prefix longer than target");
  }
  for (std::size_t i = 0; i < inferred.size(); ++i) {
    if (inferred[i].is_continuous() != backdoor.actions[i].is_continuous()) {
      throw std::invalid_argument("check_completion: action kind mismatch");
    }
    if (!actions_match(inferred[i], backdoor.actions[i], backdoor.tolerance)) {
      return CompletionCheck{false, static_cast<int>(i)};
    }
  }
  return CompletionCheck{true, -1};
}

std::string sequence_to_json(const ActionSequence& seq) {
  json j;
  j["tolerance"] = seq.tolerance;
  json actions = json::array();
  for (const auto& a : seq.actions) {
    if (a.is_continuous()) {
      actions.push_back(json{{"box", a.box}});
    } else {
      actions.push_back(json{{"discrete", a.discrete}});
    }
  }
  j["actions"] = std::move(actions);
  return j.dump();
}

ActionSequence sequence_from_json(const std::string& text) {
  const json j = json::parse(text);
  ActionSequence seq;
  seq.tolerance = j.at("tolerance").get<double>();
  for (const auto& a : j.at("actions")) {
    if (a.contains("box")) {
      seq.actions.push_back(Action::of(a.at("box").get<std::vector<double>>()));
    } else {
      seq.actions.push_back(Action::of(a.at("discrete").get<int>()));
    }
  }
  return seq;
}

}  // namespace scablab::attack
