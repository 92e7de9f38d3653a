// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#include "scablab/attack/victim_training.hpp"

#include <json.hpp>

#include <sstream>
#include <stdexcept>

namespace scablab::attack {
namespace {

using nlohmann::json;

VictimTrainResult run_training(const MarkovGame& game,
                               const learn::LearnerConfig& victim_cfg,
                               Policy* attacker_seat,
                               const ScabAttackerPolicy* machine,
                               int victim_role, int attacker_role,
                               std::int64_t total_steps, std::uint64_t seed,
                               const VictimTrainOptions& opts) {
  const int n = game.num_roles();
  if (n > 2 && static_cast<int>(opts.fixed_seats.size()) != n) {
    throw std::invalid_argument(
        "victim training: games with extra seats need a fixed policy per seat");
  }

  auto learner = learn::make_learner(game, victim_role, attacker_role,
                                     victim_cfg,
                                     derive_seed(seed, "victim/learner"));

  std::vector<Policy*> seats(static_cast<std::size_t>(n), nullptr);
  for (int r = 0; r < n; ++r) {
    if (r == victim_role) {
      seats[static_cast<std::size_t>(r)] = &learner->policy();
    } else if (r == attacker_role) {
      seats[static_cast<std::size_t>(r)] = attacker_seat;
    } else {
      seats[static_cast<std::size_t>(r)] =
          opts.fixed_seats[static_cast<std::size_t>(r)];
      if (seats[static_cast<std::size_t>(r)] == nullptr) {
        throw std::invalid_argument(
            "victim training: missing fixed policy for seat " +
            std::to_string(r));
      }
    }
  }

  VictimTrainResult result;
  std::int64_t steps = 0;
  int episode = 0;
  while (steps < total_steps) {
    EpisodeHooks hooks;
    hooks.on_transition = [&](const Transition& t) {
      if (t.role != victim_role) return;
      learner->observe(t);
      ++steps;
    };
    const auto trace = run_episode(
        game, seats,
        derive_seed(seed, "victim/train", static_cast<std::uint64_t>(episode)),
        hooks);
    learner->end_episode();

    TrainingRecord rec;
    rec.episode = episode;
    rec.return_vic = trace.return_raw[static_cast<std::size_t>(victim_role)];
    rec.return_att = trace.return_raw[static_cast<std::size_t>(attacker_role)];
    rec.loss = learner->last_loss();
    for (const auto& step : trace.steps) {
      rec.triggers_injected += step.events.trigger_completed ? 1 : 0;
      rec.completions += step.events.completion ? 1 : 0;
      rec.rewarding_steps += (step.events.tag == FsmTag::kRewarding ||
                              step.events.tag == FsmTag::kPenalizing)
                                 ? 1
                                 : 0;
    }
    result.log.records.push_back(rec);
    if (opts.on_episode) opts.on_episode(episode, trace);
    ++episode;
  }

  if (machine != nullptr) {
    result.log.tip.draws = machine->tip_draws();
    result.log.tip.successes = machine->tip_successes();
    result.log.tip.completed = machine->triggers_completed();
  }
  result.victim_checkpoint = learner->checkpoint_json();
  return result;
}

}  // namespace

std::string TrainingLog::to_jsonl() const {
  std::ostringstream out;
  for (const auto& r : records) {
    json line;
    line["episode"] = r.episode;
    line["return_vic"] = r.return_vic;
    line["return_att"] = r.return_att;
    line["loss"] = r.loss;
    line["triggers_injected"] = r.triggers_injected;
    line["completions"] = r.completions;
    line["rewarding_steps"] = r.rewarding_steps;
    out << line.dump() << "\n";
  }
  return out.str();
}

TrainingLog TrainingLog::from_jsonl(const std::string& text) {
  TrainingLog log;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw std::runtime_error(std::string("training log: bad line: ") +
                               e.what());
    }
    TrainingRecord r;
    r.episode = j.at("episode").get<int>();
    r.return_vic = j.at("return_vic").get<double>();
    r.return_att = j.at("return_att").get<double>();
    r.loss = j.at("loss").get<double>();
    r.triggers_injected = j.at("triggers_injected").get<int>();
    r.completions = j.at("completions").get<int>();
    r.rewarding_steps = j.at("rewarding_steps").get<int>();
    log.records.push_back(r);
  }
  return log;
}

VictimTrainResult train_victim_with_scab(const MarkovGame& game,
                                         const learn::LearnerConfig& victim_cfg,
                                         const forge::AttackerBundle& bundle,
                                         const forge::AttackConfig& attack_cfg,
                                         std::int64_t total_steps,
                                         std::uint64_t seed,
                                         const VictimTrainOptions& opts) {
  ScabAttackerPolicy machine(game, bundle, attack_cfg,
                             derive_seed(seed, "victim/attacker"));
  return run_training(game, victim_cfg, &machine, &machine,
                      bundle.victim_role, bundle.attacker_role, total_steps,
                      seed, opts);
}

VictimTrainResult train_victim_clean(const MarkovGame& game,
                                     const learn::LearnerConfig& victim_cfg,
                                     const forge::AttackerBundle& bundle,
                                     std::int64_t total_steps,
                                     std::uint64_t seed,
                                     const VictimTrainOptions& opts) {
  bundle.validate(game);
  auto cover = bundle.make_std_policy(game);
  return run_training(game, victim_cfg, cover.get(), nullptr,
                      bundle.victim_role, bundle.attacker_role, total_steps,
                      seed, opts);
}

}  // namespace scablab::attack
