// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#include "scablab/learn/learners.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scablab/digest.hpp"

namespace scablab::learn {

using nlohmann::json;

double EpsSchedule::at(std::int64_t step, std::int64_t total_steps) const {
  if (total_steps <= 0) return end;
  const double horizon = fraction * static_cast<double>(total_steps);
  if (horizon <= 0.0) return end;
  const double t = std::min(1.0, static_cast<double>(step) / horizon);
  return start + (end - start) * t;
}

std::string algo_name(Algo algo) {
  switch (algo) {
    case Algo::kTabularQ: return "tabular_q";
    case Algo::kValueNet: return "value_net";
    case Algo::kPolicyGrad: return "policy_grad";
  }
  throw std::logic_error("algo_name: bad tag");
}

Algo algo_from_name(const std::string& name) {
  if (name == "tabular_q") return Algo::kTabularQ;
  if (name == "value_net") return Algo::kValueNet;
  if (name == "policy_grad") return Algo::kPolicyGrad;
  throw std::invalid_argument("unknown algorithm: " + name);
}

void LearnerConfig::validate() const {
  if (alpha <= 0.0 || critic_alpha <= 0.0) {
    throw std::invalid_argument("learner: step sizes must be positive");
  }
  auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in01(eps.start) || !in01(eps.end) || eps.fraction <= 0.0 ||
      eps.fraction > 1.0) {
    throw std::invalid_argument("learner: bad exploration schedule");
  }
  if (clip_ratio <= 0.0) {
    throw std::invalid_argument("learner: clip ratio must be positive");
  }
  if (batch_size < 1 || update_every < 1 || target_sync_every < 1 ||
      rollout_horizon < 1 || epochs < 1 || k_in < 1) {
    throw std::invalid_argument("learner: cadence fields must be >= 1");
  }
  if (replay_capacity < batch_size) {
    throw std::invalid_argument("learner: replay smaller than batch");
  }
  if (total_steps < 1) {
    throw std::invalid_argument("learner: total_steps must be >= 1");
  }
  (void)discounted_return(std::vector<double>{}, discount);  // gamma check
}

int argmax_lowest(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("argmax of empty range");
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i) {
    if (values[static_cast<std::size_t>(i)] >
        values[static_cast<std::size_t>(best)]) {
      best = i;
    }
  }
  return best;
}

int select_epsilon_greedy(std::span<const double> values, double eps,
                          bool explore, RngStream& rng) {
  if (explore && rng.bernoulli(eps)) {
    return static_cast<int>(rng.next_below(values.size()));
  }
  return argmax_lowest(values);
}

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.empty()) throw std::invalid_argument("softmax of empty range");
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - m);
    sum += p[i];
  }
  for (auto& v : p) v /= sum;
  return p;
}

double log_softmax_at(std::span<const double> logits, int index) {
  if (index < 0 || index >= static_cast<int>(logits.size())) {
    throw std::invalid_argument("log_softmax: index out of range");
  }
  const double m = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (const double v : logits) sum += std::exp(v - m);
  return logits[static_cast<std::size_t>(index)] - m - std::log(sum);
}

int select_softmax(std::span<const double> logits, bool explore,
                   RngStream& rng) {
  if (!explore) return argmax_lowest(logits);
  const auto p = softmax(logits);
  const double u = rng.next_double();
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(p.size()) - 1;  // u landed in rounding slack
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay: zero capacity");
  items_.reserve(capacity);
}

void ReplayBuffer::push(Item item) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(item));
    return;
  }
  items_[next_] = std::move(item);
  next_ = (next_ + 1) % capacity_;
}

const ReplayBuffer::Item& ReplayBuffer::sample(RngStream& rng) const {
  if (items_.empty()) throw std::logic_error("replay: sample from empty");
  return items_[rng.next_below(items_.size())];
}

double value_net_train_step(SmallNet& net, const SmallNet& target,
                            std::span<const ReplayBuffer::Item> batch,
                            double gamma, double alpha) {
  if (batch.empty()) throw std::invalid_argument("value_net: empty batch");
  std::vector<double> grad(static_cast<std::size_t>(net.param_count()), 0.0);
  double loss = 0.0;
  const double n = static_cast<double>(batch.size());
  SmallNet::Tape tape;
  for (const auto& item : batch) {
    const auto qs = net.forward_tape(item.obs, tape);
    double y = item.reward;
    if (!item.done) {
      const auto tq = target.forward(item.next_obs);
      y += gamma * *std::max_element(tq.begin(), tq.end());
    }
    const double diff = qs[static_cast<std::size_t>(item.action)] - y;
    loss += diff * diff;
    std::vector<double> grad_out(qs.size(), 0.0);
    grad_out[static_cast<std::size_t>(item.action)] = 2.0 * diff / n;
    net.backward(tape, grad_out, grad);
  }
  loss /= n;
  if (!std::isfinite(loss)) {
    throw std::runtime_error("value_net: non-finite loss");
  }
  net.apply_gradient(grad, alpha);
  return loss;
}

PolicyGradResult policy_grad_train_step(SmallNet& policy, SmallNet& critic,
                                        std::span<const RolloutStep> rollout,
                                        double gamma, double clip,
                                        double alpha_policy,
                                        double alpha_critic, int epochs) {
  if (rollout.empty()) throw std::invalid_argument("policy_grad: empty rollout");
  if (!rollout.back().done) {
    throw std::invalid_argument("policy_grad: rollout must end an episode");
  }
  const std::size_t n = rollout.size();
  std::vector<double> returns(n);
  double acc = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    if (rollout[i].done) acc = 0.0;
    acc = rollout[i].reward + gamma * acc;
    returns[i] = acc;
  }
  // Advantages against the critic frozen at rollout time.
  std::vector<double> adv(n);
  for (std::size_t i = 0; i < n; ++i) {
    adv[i] = returns[i] - critic.forward(rollout[i].obs)[0];
  }

  PolicyGradResult res;
  SmallNet::Tape tape;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    std::vector<double> pgrad(static_cast<std::size_t>(policy.param_count()),
                              0.0);
    double sloss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto logits = policy.forward_tape(rollout[i].obs, tape);
      const double logp = log_softmax_at(logits, rollout[i].action);
      const double ratio = std::exp(logp - rollout[i].old_logp);
      const double unclipped = ratio * adv[i];
      const double clipped =
          std::clamp(ratio, 1.0 - clip, 1.0 + clip) * adv[i];
      sloss += -std::min(unclipped, clipped);
      // The surrogate is flat where the clipped branch is active.
      if (unclipped <= clipped + 1e-15 && adv[i] != 0.0) {
        const auto p = softmax(logits);
        std::vector<double> grad_out(logits.size());
        for (std::size_t k = 0; k < logits.size(); ++k) {
          const double onehot =
              k == static_cast<std::size_t>(rollout[i].action) ? 1.0 : 0.0;
          grad_out[k] =
              -adv[i] * ratio * (onehot - p[k]) / static_cast<double>(n);
        }
        policy.backward(tape, grad_out, pgrad);
      }
    }
    sloss /= static_cast<double>(n);
    if (!std::isfinite(sloss)) {
      throw std::runtime_error("policy_grad: non-finite surrogate");
    }
    if (epoch == 0) res.surrogate_loss = sloss;
    policy.apply_gradient(pgrad, alpha_policy);

    std::vector<double> cgrad(static_cast<std::size_t>(critic.param_count()),
                              0.0);
    double closs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = critic.forward_tape(rollout[i].obs, tape)[0];
      const double diff = v - returns[i];
      closs += diff * diff;
      const std::vector<double> grad_out = {2.0 * diff /
                                            static_cast<double>(n)};
      critic.backward(tape, grad_out, cgrad);
    }
    closs /= static_cast<double>(n);
    if (epoch == 0) res.critic_loss = closs;
    critic.apply_gradient(cgrad, alpha_critic);
  }
  return res;
}

// --- json helpers ------------------------------------------------------------

namespace {

json config_to_json(const LearnerConfig& c) {
  json j;
  j["algo"] = algo_name(c.algo);
  j["alpha"] = c.alpha;
  j["critic_alpha"] = c.critic_alpha;
  j["gamma"] = c.discount.gamma;
  j["eps"] = {{"start", c.eps.start},
              {"end", c.eps.end},
              {"fraction", c.eps.fraction}};
  j["clip_ratio"] = c.clip_ratio;
  j["batch_size"] = c.batch_size;
  j["update_every"] = c.update_every;
  j["target_sync_every"] = c.target_sync_every;
  j["rollout_horizon"] = c.rollout_horizon;
  j["epochs"] = c.epochs;
  j["hidden"] = c.hidden;
  j["replay_capacity"] = c.replay_capacity;
  j["initial_q"] = c.initial_q;
  j["total_steps"] = c.total_steps;
  j["feature"] = {{"own_lag", c.feature.own_lag},
                  {"partner_lag", c.feature.partner_lag}};
  j["k_in"] = c.k_in;
  j["stack_features"] = c.stack_features;
  return j;
}

LearnerConfig config_from_json(const json& j) {
  LearnerConfig c;
  c.algo = algo_from_name(j.at("algo").get<std::string>());
  c.alpha = j.at("alpha").get<double>();
  c.critic_alpha = j.at("critic_alpha").get<double>();
  c.discount.gamma = j.at("gamma").get<double>();
  c.eps.start = j.at("eps").at("start").get<double>();
  c.eps.end = j.at("eps").at("end").get<double>();
  c.eps.fraction = j.at("eps").at("fraction").get<double>();
  c.clip_ratio = j.at("clip_ratio").get<double>();
  c.batch_size = j.at("batch_size").get<int>();
  c.update_every = j.at("update_every").get<int>();
  c.target_sync_every = j.at("target_sync_every").get<int>();
  c.rollout_horizon = j.at("rollout_horizon").get<int>();
  c.epochs = j.at("epochs").get<int>();
  c.hidden = j.at("hidden").get<std::vector<int>>();
  c.replay_capacity = j.at("replay_capacity").get<int>();
  c.initial_q = j.at("initial_q").get<double>();
  c.total_steps = j.at("total_steps").get<std::int64_t>();
  c.feature.own_lag = j.at("feature").at("own_lag").get<int>();
  c.feature.partner_lag = j.at("feature").at("partner_lag").get<int>();
  c.k_in = j.at("k_in").get<int>();
  c.stack_features = j.at("stack_features").get<bool>();
  c.validate();
  return c;
}

std::unique_ptr<Featurizer> build_featurizer(const MarkovGame& game,
                                             int self_role, int partner_role,
                                             const LearnerConfig& cfg) {
  if (cfg.stack_features) {
    return make_stack_featurizer(game, self_role, cfg.k_in);
  }
  return make_featurizer(game, self_role, partner_role, cfg.feature);
}

json net_to_json(const SmallNet& net) {
  json j;
  j["input"] = net.spec().input_dim;
  j["hidden"] = net.spec().hidden;
  j["output"] = net.spec().output_dim;
  j["activation"] = net.spec().activation;
  j["params"] = doubles_to_base64(net.params());
  return j;
}

SmallNet net_from_json(const json& j) {
  SmallNetSpec spec;
  spec.input_dim = j.at("input").get<int>();
  spec.hidden = j.at("hidden").get<std::vector<int>>();
  spec.output_dim = j.at("output").get<int>();
  spec.activation = j.at("activation").get<std::string>();
  RngStream scratch(0, "checkpoint/net");
  SmallNet net(spec, scratch);
  auto params = base64_to_doubles(j.at("params").get<std::string>());
  if (params.size() != net.params().size()) {
    throw std::invalid_argument("checkpoint: parameter count mismatch");
  }
  net.params() = std::move(params);
  return net;
}

json table_to_json(const QTable& table) {
  json rows = json::object();
  std::vector<std::uint64_t> keys;
  keys.reserve(table.rows().size());
  for (const auto& [k, _] : table.rows()) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  for (const auto k : keys) {
    json row;
    row["q"] = doubles_to_base64(table.rows().at(k));
    json visits = json::array();
    for (int a = 0; a < table.num_actions(); ++a) {
      visits.push_back(table.visits(k, a));
    }
    row["n"] = std::move(visits);
    rows[digest_hex(k)] = std::move(row);
  }
  json j;
  j["actions"] = table.num_actions();
  j["initial"] = table.initial_value();
  j["rows"] = std::move(rows);
  return j;
}

QTable table_from_json(const json& j) {
  QTable table(j.at("actions").get<int>(), j.at("initial").get<double>());
  for (const auto& [hex, row] : j.at("rows").items()) {
    const std::uint64_t key = std::stoull(hex, nullptr, 16);
    const auto qs = base64_to_doubles(row.at("q").get<std::string>());
    if (static_cast<int>(qs.size()) != table.num_actions()) {
      throw std::invalid_argument("checkpoint: row width mismatch");
    }
    for (int a = 0; a < table.num_actions(); ++a) {
      table.set(key, a, qs[static_cast<std::size_t>(a)]);
    }
    const auto& visits = row.at("n");
    for (int a = 0; a < table.num_actions(); ++a) {
      const int n = visits.at(static_cast<std::size_t>(a)).get<int>();
      for (int i = 0; i < n; ++i) table.add_visit(key, a);
    }
  }
  return table;
}

json checkpoint_header(const MarkovGame& game, int self_role,
                       int partner_role, const LearnerConfig& cfg,
                       std::int64_t steps) {
  json j;
  j["version"] = 1;
  j["kind"] = "learner";
  j["game"] = game.name();
  j["self_role"] = self_role;
  j["partner_role"] = partner_role;
  j["config"] = config_to_json(cfg);
  j["steps"] = steps;
  return j;
}

// --- frozen evaluation policies ----------------------------------------------

class TabularGreedyPolicy final : public Policy {
 public:
  TabularGreedyPolicy(const MarkovGame& game, int self_role, int partner_role,
                      const LearnerConfig& cfg, QTable table)
      : feat_(build_featurizer(game, self_role, partner_role, cfg)),
        codec_(ActionCodec::for_role(game, self_role)),
        table_(std::move(table)) {}

  Action act(ObsWindow window, RngStream&) override {
    const auto row = table_.row(feat_->key(window));
    return codec_.decode(argmax_lowest(row));
  }

 private:
  std::unique_ptr<Featurizer> feat_;
  ActionCodec codec_;
  QTable table_;
};

class NetGreedyPolicy final : public Policy {
 public:
  NetGreedyPolicy(const MarkovGame& game, int self_role, int partner_role,
                  const LearnerConfig& cfg, SmallNet net)
      : feat_(build_featurizer(game, self_role, partner_role, cfg)),
        codec_(ActionCodec::for_role(game, self_role)),
        net_(std::move(net)) {}

  Action act(ObsWindow window, RngStream&) override {
    const auto values = net_.forward(feat_->features(window));
    return codec_.decode(argmax_lowest(values));
  }

 private:
  std::unique_ptr<Featurizer> feat_;
  ActionCodec codec_;
  SmallNet net_;
};

// --- learners ------------------------------------------------------------------

class LearnerBase;

// Exploring policy: defers action selection back to the owning learner so
// the exploration schedule can follow the global step count.
class ExplorePolicy final : public Policy {
 public:
  explicit ExplorePolicy(LearnerBase* owner) : owner_(owner) {}
  Action act(ObsWindow window, RngStream& rng) override;

 private:
  LearnerBase* owner_;
};

class LearnerBase : public Learner {
 public:
  LearnerBase(const MarkovGame& game, int self_role, int partner_role,
              LearnerConfig cfg)
      : game_(game),
        self_role_(self_role),
        partner_role_(partner_role),
        cfg_(std::move(cfg)),
        feat_(build_featurizer(game, self_role, partner_role, cfg_)),
        codec_(ActionCodec::for_role(game, self_role)),
        explore_(this) {
    cfg_.validate();
  }

  Policy& policy() override { return explore_; }
  std::int64_t steps_seen() const override { return steps_; }
  double last_loss() const override { return last_loss_; }

  virtual Action select(ObsWindow window, RngStream& rng) = 0;

  const MarkovGame& game() const { return game_; }

 protected:
  int encode_action(const Action& a) const {
    const int idx = codec_.encode(a, 1e-9);
    if (idx < 0) {
      throw std::invalid_argument(
          "learner: observed an action outside its codec");
    }
    return idx;
  }

  const MarkovGame& game_;
  int self_role_;
  int partner_role_;
  LearnerConfig cfg_;
  std::unique_ptr<Featurizer> feat_;
  ActionCodec codec_;
  ExplorePolicy explore_;
  std::int64_t steps_ = 0;
  double last_loss_ = 0.0;
};

Action ExplorePolicy::act(ObsWindow window, RngStream& rng) {
  return owner_->select(window, rng);
}

class TabularQLearner final : public LearnerBase {
 public:
  TabularQLearner(const MarkovGame& game, int self_role, int partner_role,
                  LearnerConfig cfg)
      : LearnerBase(game, self_role, partner_role, std::move(cfg)),
        table_(codec_.size(), cfg_.initial_q) {}

  TabularQLearner(const MarkovGame& game, const json& j)
      : LearnerBase(game, j.at("self_role").get<int>(),
                    j.at("partner_role").get<int>(),
                    config_from_json(j.at("config"))),
        table_(table_from_json(j.at("table"))) {
    steps_ = j.at("steps").get<std::int64_t>();
  }

  Algo algo() const override { return Algo::kTabularQ; }

  Action select(ObsWindow window, RngStream& rng) override {
    const auto row = table_.row(feat_->key(window));
    const double eps = cfg_.eps.at(steps_, cfg_.total_steps);
    return codec_.decode(select_epsilon_greedy(row, eps, true, rng));
  }

  void observe(const Transition& t) override {
    const auto key = feat_->key(t.before);
    const auto next_key = feat_->key(t.after);
    const double td =
        q_update(table_, key, encode_action(t.action), t.reward, next_key,
                 t.done, cfg_.alpha, cfg_.discount.gamma);
    last_loss_ = td * td;
    ++steps_;
  }

  void end_episode() override {}

  std::unique_ptr<Policy> snapshot() const override {
    return std::make_unique<TabularGreedyPolicy>(game_, self_role_,
                                                 partner_role_, cfg_, table_);
  }

  std::string checkpoint_json() const override {
    json j = checkpoint_header(game_, self_role_, partner_role_, cfg_, steps_);
    j["table"] = table_to_json(table_);
    return j.dump();
  }

  const QTable& table() const { return table_; }

 private:
  QTable table_;
};

class ValueNetLearner final : public LearnerBase {
 public:
  ValueNetLearner(const MarkovGame& game, int self_role, int partner_role,
                  LearnerConfig cfg, std::uint64_t seed)
      : LearnerBase(game, self_role, partner_role, std::move(cfg)),
        init_rng_(seed, "learner/init", static_cast<std::uint64_t>(self_role)),
        net_(SmallNetSpec{feat_->dim(), cfg_.hidden, codec_.size(), "tanh"},
             init_rng_),
        target_(net_),
        replay_(static_cast<std::size_t>(cfg_.replay_capacity)),
        replay_rng_(seed, "learner/replay",
                    static_cast<std::uint64_t>(self_role)) {}

  ValueNetLearner(const MarkovGame& game, const json& j)
      : LearnerBase(game, j.at("self_role").get<int>(),
                    j.at("partner_role").get<int>(),
                    config_from_json(j.at("config"))),
        init_rng_(0, "learner/init"),
        net_(net_from_json(j.at("nets").at("q"))),
        target_(net_from_json(j.at("nets").at("target"))),
        replay_(static_cast<std::size_t>(cfg_.replay_capacity)),
        replay_rng_() {
    steps_ = j.at("steps").get<std::int64_t>();
    replay_rng_.restore(
        std::stoull(j.at("rng").at("key").get<std::string>(), nullptr, 16),
        j.at("rng").at("counter").get<std::uint64_t>());
  }

  Algo algo() const override { return Algo::kValueNet; }

  Action select(ObsWindow window, RngStream& rng) override {
    const auto values = net_.forward(feat_->features(window));
    const double eps = cfg_.eps.at(steps_, cfg_.total_steps);
    return codec_.decode(select_epsilon_greedy(values, eps, true, rng));
  }

  void observe(const Transition& t) override {
    ReplayBuffer::Item item;
    item.obs = feat_->features(t.before);
    item.action = encode_action(t.action);
    item.reward = t.reward;
    item.next_obs = feat_->features(t.after);
    item.done = t.done;
    replay_.push(std::move(item));
    ++steps_;

    if (steps_ % cfg_.update_every == 0 &&
        replay_.size() >= static_cast<std::size_t>(cfg_.batch_size)) {
      std::vector<ReplayBuffer::Item> batch;
      batch.reserve(static_cast<std::size_t>(cfg_.batch_size));
      for (int i = 0; i < cfg_.batch_size; ++i) {
        batch.push_back(replay_.sample(replay_rng_));
      }
      last_loss_ = value_net_train_step(net_, target_, batch,
                                        cfg_.discount.gamma, cfg_.alpha);
    }
    if (steps_ % cfg_.target_sync_every == 0) target_ = net_;
  }

  void end_episode() override {}

  std::unique_ptr<Policy> snapshot() const override {
    return std::make_unique<NetGreedyPolicy>(game_, self_role_, partner_role_,
                                             cfg_, net_);
  }

  std::string checkpoint_json() const override {
    json j = checkpoint_header(game_, self_role_, partner_role_, cfg_, steps_);
    j["nets"] = {{"q", net_to_json(net_)}, {"target", net_to_json(target_)}};
    j["rng"] = {{"key", digest_hex(replay_rng_.key())},
                {"counter", replay_rng_.counter()}};
    return j.dump();
  }

 private:
  RngStream init_rng_;
  SmallNet net_;
  SmallNet target_;
  ReplayBuffer replay_;
  RngStream replay_rng_;
};

class PolicyGradLearner final : public LearnerBase {
 public:
  PolicyGradLearner(const MarkovGame& game, int self_role, int partner_role,
                    LearnerConfig cfg, std::uint64_t seed)
      : LearnerBase(game, self_role, partner_role, std::move(cfg)),
        init_rng_(seed, "learner/init", static_cast<std::uint64_t>(self_role)),
        policy_net_(
            SmallNetSpec{feat_->dim(), cfg_.hidden, codec_.size(), "tanh"},
            init_rng_),
        critic_(SmallNetSpec{feat_->dim(), cfg_.hidden, 1, "tanh"},
                init_rng_) {}

  PolicyGradLearner(const MarkovGame& game, const json& j)
      : LearnerBase(game, j.at("self_role").get<int>(),
                    j.at("partner_role").get<int>(),
                    config_from_json(j.at("config"))),
        init_rng_(0, "learner/init"),
        policy_net_(net_from_json(j.at("nets").at("policy"))),
        critic_(net_from_json(j.at("nets").at("critic"))) {
    steps_ = j.at("steps").get<std::int64_t>();
  }

  Algo algo() const override { return Algo::kPolicyGrad; }

  Action select(ObsWindow window, RngStream& rng) override {
    const auto logits = policy_net_.forward(feat_->features(window));
    return codec_.decode(select_softmax(logits, true, rng));
  }

  void observe(const Transition& t) override {
    RolloutStep step;
    step.obs = feat_->features(t.before);
    step.action = encode_action(t.action);
    step.reward = t.reward;
    step.done = t.done;
    const auto logits = policy_net_.forward(step.obs);
    step.old_logp = log_softmax_at(logits, step.action);
    rollout_.push_back(std::move(step));
    ++steps_;
  }

  void end_episode() override {
    if (rollout_.size() < static_cast<std::size_t>(cfg_.rollout_horizon)) {
      return;
    }
    const auto res = policy_grad_train_step(
        policy_net_, critic_, rollout_, cfg_.discount.gamma, cfg_.clip_ratio,
        cfg_.alpha, cfg_.critic_alpha, cfg_.epochs);
    last_loss_ = res.surrogate_loss;
    rollout_.clear();
  }

  std::unique_ptr<Policy> snapshot() const override {
    return std::make_unique<NetGreedyPolicy>(game_, self_role_, partner_role_,
                                             cfg_, policy_net_);
  }

  std::string checkpoint_json() const override {
    json j = checkpoint_header(game_, self_role_, partner_role_, cfg_, steps_);
    j["nets"] = {{"policy", net_to_json(policy_net_)},
                 {"critic", net_to_json(critic_)}};
    return j.dump();
  }

 private:
  RngStream init_rng_;
  SmallNet policy_net_;
  SmallNet critic_;
  std::vector<RolloutStep> rollout_;
};

}  // namespace

std::unique_ptr<Learner> make_learner(const MarkovGame& game, int self_role,
                                      int partner_role,
                                      const LearnerConfig& config,
                                      std::uint64_t seed) {
  config.validate();
  switch (config.algo) {
    case Algo::kTabularQ:
      return std::make_unique<TabularQLearner>(game, self_role, partner_role,
                                               config);
    case Algo::kValueNet:
      return std::make_unique<ValueNetLearner>(game, self_role, partner_role,
                                               config, seed);
    case Algo::kPolicyGrad:
      return std::make_unique<PolicyGradLearner>(game, self_role, partner_role,
                                                 config, seed);
  }
  throw std::logic_error("make_learner: bad algorithm tag");
}

std::unique_ptr<Learner> learner_from_checkpoint(const MarkovGame& game,
                                                 const std::string& text) {
  const json j = json::parse(text);
  if (j.at("kind").get<std::string>() != "learner" ||
      j.at("version").get<int>() != 1) {
    throw std::invalid_argument("checkpoint: not a v1 learner checkpoint");
  }
  if (j.at("game").get<std::string>() != game.name()) {
    throw std::invalid_argument("checkpoint: game mismatch, expected " +
                                game.name());
  }
  const Algo algo = algo_from_name(j.at("config").at("algo").get<std::string>());
  switch (algo) {
    case Algo::kTabularQ: return std::make_unique<TabularQLearner>(game, j);
    case Algo::kValueNet: return std::make_unique<ValueNetLearner>(game, j);
    case Algo::kPolicyGrad:
      return std::make_unique<PolicyGradLearner>(game, j);
  }
  throw std::logic_error("checkpoint: bad algorithm tag");
}

std::unique_ptr<Policy> policy_from_checkpoint(const MarkovGame& game,
                                               const std::string& text) {
  return learner_from_checkpoint(game, text)->snapshot();
}

}  // namespace scablab::learn
