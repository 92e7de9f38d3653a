// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#include "scablab/exploit/trigger_net.hpp"

#include <json.hpp>

#include <algorithm>
#include <stdexcept>

#include "scablab/episode.hpp"
#include "scablab/learn/checkpoint.hpp"
#include "scablab/learn/learners.hpp"

namespace scablab::exploit {
namespace {

using nlohmann::json;

// Last k frames, oldest first, padded by repeating the earliest frame —
// the same windowing the serialized net was trained on.
std::vector<double> stack_frames(ObsWindow window, int k) {
  if (window.empty()) throw std::invalid_argument("trigger net: empty window");
  const int n = static_cast<int>(window.size());
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(k) * window.back().frame.size());
  for (int i = k; i >= 1; --i) {
    const auto& frame = window[static_cast<std::size_t>(std::max(0, n - i))].frame;
    out.insert(out.end(), frame.begin(), frame.end());
  }
  return out;
}

struct Decision {
  std::vector<double> features;
  int action = 0;  // 0 hold, 1 fire
  int step = 0;
};

// Training-time composition: same two-state machine as the composed test
// policy, but the fire decision is sampled from the softmax head so the
// gradient has something to push against.
class SamplingComposer final : public Policy {
 public:
  SamplingComposer(learn::SmallNet& net, Policy* op,
                   const attack::ActionSequence& trigger, int window)
      : net_(&net), op_(op), trigger_(&trigger), window_(window) {}

  void begin_episode() override {
    cursor_ = -1;
    step_ = 0;
    decisions.clear();
    fire_steps.clear();
    op_->begin_episode();
  }

  Action act(ObsWindow window, RngStream& rng) override {
    const int t = step_++;
    if (cursor_ >= 0) {
      const Action a = trigger_->actions[static_cast<std::size_t>(cursor_)];
      if (++cursor_ == trigger_->size()) cursor_ = -1;
      return a;
    }
    Decision d;
    d.features = stack_frames(window, window_);
    d.step = t;
    const auto logits = net_->forward(d.features);
    d.action = learn::select_softmax(logits, /*explore=*/true, rng);
    decisions.push_back(std::move(d));
    if (decisions.back().action == 1) {
      fire_steps.push_back(t);
      cursor_ = trigger_->size() == 1 ? -1 : 1;
      return trigger_->actions.front();
    }
    return op_->act(window, rng);
  }

  std::vector<Decision> decisions;
  std::vector<int> fire_steps;

 private:
  learn::SmallNet* net_;
  Policy* op_;
  const attack::ActionSequence* trigger_;
  int window_;
  int cursor_ = -1;
  int step_ = 0;
};

}  // namespace

double TriggerNetwork::score(const MarkovGame&, int, ObsWindow window) const {
  if (net_.param_count() == 0) {
    throw std::logic_error("trigger net: evaluated before training");
  }
  const auto logits = net_.forward(stack_frames(window, window_));
  return logits[1] - logits[0];
}

std::string TriggerNetwork::to_json() const {
  json j;
  j["kind"] = "trigger_net";
  j["version"] = 1;
  j["window"] = window_;
  j["spec"] = {{"input_dim", net_.spec().input_dim},
               {"hidden", net_.spec().hidden},
               {"output_dim", net_.spec().output_dim},
               {"activation", net_.spec().activation}};
  j["params"] = net_.params();
  return j.dump();
}

TriggerNetwork TriggerNetwork::from_json(const std::string& text) {
  const json j = json::parse(text);
  if (j.at("kind").get<std::string>() != "trigger_net" ||
      j.at("version").get<int>() != 1) {
    throw std::invalid_argument("trigger net: not a v1 trigger_net blob");
  }
  TriggerNetwork out;
  out.window_ = j.at("window").get<int>();
  learn::SmallNetSpec spec;
  spec.input_dim = j.at("spec").at("input_dim").get<int>();
  spec.hidden = j.at("spec").at("hidden").get<std::vector<int>>();
  spec.output_dim = j.at("spec").at("output_dim").get<int>();
  spec.activation = j.at("spec").at("activation").get<std::string>();
  RngStream scratch(0, "trigger-net/thaw");
  out.net_ = learn::SmallNet(spec, scratch);
  const auto params = j.at("params").get<std::vector<double>>();
  if (params.size() != out.net_.params().size()) {
    throw std::invalid_argument("trigger net: parameter count mismatch");
  }
  out.net_.params() = params;
  return out;
}

void TriggerNetTrainConfig::validate() const {
  if (penalty < 0.0) throw std::invalid_argument("trigger net: penalty < 0");
  if (gamma <= 0.0 || gamma > 1.0) {
    throw std::invalid_argument("trigger net: gamma must lie in (0,1]");
  }
  if (alpha <= 0.0) throw std::invalid_argument("trigger net: alpha <= 0");
  if (window < 1) throw std::invalid_argument("trigger net: window < 1");
  for (int hsize : hidden) {
    if (hsize < 1) throw std::invalid_argument("trigger net: bad hidden size");
  }
}

TriggerNetwork train_trigger_network(const MarkovGame& game,
                                     const std::string& victim_checkpoint,
                                     Policy& op_policy,
                                     const attack::ActionSequence& trigger,
                                     const TriggerNetTrainConfig& config,
                                     std::int64_t total_steps,
                                     std::uint64_t seed) {
  config.validate();
  if (game.num_roles() != 2) {
    throw std::invalid_argument(
        "trigger net: training expects the two-seat layout");
  }
  if (total_steps <= 0) {
    throw std::invalid_argument("trigger net: total_steps must be positive");
  }
  const int op_role = 1;
  trigger.validate(game.action_space(op_role));
  const auto victim = learn::policy_from_checkpoint(game, victim_checkpoint);

  RngStream probe(seed, "exploit/probe");
  const State s0 = game.initial_state(probe);
  const int frame_dim =
      static_cast<int>(game.observe(s0, op_role).frame.size());

  learn::SmallNetSpec spec;
  spec.input_dim = frame_dim * config.window;
  spec.hidden = config.hidden;
  spec.output_dim = 2;
  RngStream init(seed, "exploit/net-init");
  TriggerNetwork out;
  out.window_ = config.window;
  out.net_ = learn::SmallNet(spec, init);

  SamplingComposer composer(out.net_, &op_policy, trigger, config.window);
  std::vector<Policy*> seats = {victim.get(), &composer};

  std::vector<double> grad(static_cast<std::size_t>(out.net_.param_count()));
  std::vector<double> grad_out(2);
  std::int64_t steps = 0;
  std::uint64_t episode = 0;
  while (steps < total_steps) {
    const auto trace = run_episode(
        game, seats, derive_seed(seed, "exploit/episode", episode));
    steps += static_cast<std::int64_t>(trace.steps.size());
    ++episode;
    if (composer.decisions.empty()) continue;

    // Returns-to-go of the penalized reward stream.
    std::vector<double> shaped(trace.steps.size());
    for (std::size_t t = 0; t < trace.steps.size(); ++t) {
      shaped[t] = trace.steps[t].rewards[static_cast<std::size_t>(op_role)];
    }
    for (int fs : composer.fire_steps) {
      shaped[static_cast<std::size_t>(fs)] -= config.penalty;
    }
    std::vector<double> to_go(shaped.size());
    double acc = 0.0;
    for (std::size_t t = shaped.size(); t-- > 0;) {
      acc = shaped[t] + config.gamma * acc;
      to_go[t] = acc;
    }

    double baseline = 0.0;
    for (const auto& d : composer.decisions) {
      baseline += to_go[static_cast<std::size_t>(d.step)];
    }
    baseline /= static_cast<double>(composer.decisions.size());

    std::fill(grad.begin(), grad.end(), 0.0);
    for (const auto& d : composer.decisions) {
      const double adv = to_go[static_cast<std::size_t>(d.step)] - baseline;
      learn::SmallNet::Tape tape;
      const auto logits = out.net_.forward_tape(d.features, tape);
      const auto probs = learn::softmax(logits);
      for (int j = 0; j < 2; ++j) {
        const double indicator = j == d.action ? 1.0 : 0.0;
        grad_out[static_cast<std::size_t>(j)] =
            -adv * (indicator - probs[static_cast<std::size_t>(j)]);
      }
      out.net_.backward(tape, grad_out, grad);
    }
    const double scale =
        config.alpha / static_cast<double>(composer.decisions.size());
    out.net_.apply_gradient(grad, scale);
  }
  return out;
}

}  // namespace scablab::exploit
