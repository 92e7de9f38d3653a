// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCABLAB_LEARN_LEARNERS_HPP_
#define SCABLAB_LEARN_LEARNERS_HPP_

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "scablab/episode.hpp"
#include "scablab/learn/featurize.hpp"
#include "scablab/learn/qtable.hpp"
#include "scablab/learn/small_net.hpp"

namespace scablab::learn {

// Linear decay from start to end over the first `fraction` of total steps.
struct EpsSchedule {
  double start = 1.0;
  double end = 0.05;
  double fraction = 0.5;
  double at(std::int64_t step, std::int64_t total_steps) const;
};

enum class Algo { kTabularQ, kValueNet, kPolicyGrad };

std::string algo_name(Algo algo);
Algo algo_from_name(const std::string& name);

struct LearnerConfig {
  Algo algo = Algo::kTabularQ;
  double alpha = 0.1;          // step size (policy net under policy_grad)
  double critic_alpha = 0.05;  // critic step size (policy_grad only)
  DiscountSpec discount{0.99};
  EpsSchedule eps{};
  double clip_ratio = 0.2;
  int batch_size = 32;
  int update_every = 4;        // env steps between value-net updates
  int target_sync_every = 500; // env steps between target-net syncs
  int rollout_horizon = 256;   // min steps buffered before a policy-grad update
  int epochs = 4;              // surrogate epochs per policy-grad update
  std::vector<int> hidden = {32};
  int replay_capacity = 20000;
  double initial_q = 0.0;
  std::int64_t total_steps = 200000;  // exploration schedule horizon
  FeatureSpec feature{};
  int k_in = 4;  // frame-stack depth when the stack featurizer is in use
  bool stack_features = false;

  void validate() const;
};

// --- selection helpers -----------------------------------------------------

// Greedy argmax with deterministic lowest-index tie-breaking.
int argmax_lowest(std::span<const double> values);

int select_epsilon_greedy(std::span<const double> values, double eps,
                          bool explore, RngStream& rng);

std::vector<double> softmax(std::span<const double> logits);
double log_softmax_at(std::span<const double> logits, int index);
// Samples from softmax(logits) when exploring, else argmax_lowest.
int select_softmax(std::span<const double> logits, bool explore,
                   RngStream& rng);

// --- replay and gradient steps ---------------------------------------------

class ReplayBuffer {
 public:
  struct Item {
    std::vector<double> obs;
    int action = 0;
    double reward = 0.0;
    std::vector<double> next_obs;
    bool done = false;
  };

  explicit ReplayBuffer(std::size_t capacity);
  void push(Item item);  // FIFO eviction once full
  const Item& sample(RngStream& rng) const;
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }

 private:
  std::size_t capacity_;
  std::vector<Item> items_;
  std::size_t next_ = 0;
};

// One SGD step on the mean squared Bellman error against a frozen target
// net. Returns the pre-step loss.
double value_net_train_step(SmallNet& net, const SmallNet& target,
                            std::span<const ReplayBuffer::Item> batch,
                            double gamma, double alpha);

struct RolloutStep {
  std::vector<double> obs;
  int action = 0;
  double reward = 0.0;
  bool done = false;
  double old_logp = 0.0;  // log pi_old(action | obs) at collection time
};

struct PolicyGradResult {
  double surrogate_loss = 0.0;  // pre-update, first epoch
  double critic_loss = 0.0;     // pre-update, first epoch
};

// Clipped-surrogate update over complete episodes. Advantages use
// empirical discounted reward-to-go minus the critic's pre-update value;
// the critic then regresses on the same returns.
PolicyGradResult policy_grad_train_step(SmallNet& policy, SmallNet& critic,
                                        std::span<const RolloutStep> rollout,
                                        double gamma, double clip,
                                        double alpha_policy,
                                        double alpha_critic, int epochs = 4);

// --- learners ----------------------------------------------------------------

// A learner owns an exploring policy and updates from engine transitions.
// Evaluation snapshots are immutable greedy policies that share nothing
// with the live learner.
class Learner {
 public:
  virtual ~Learner() = default;
  virtual Algo algo() const = 0;
  virtual Policy& policy() = 0;
  virtual void observe(const Transition& t) = 0;
  virtual void end_episode() = 0;
  virtual std::unique_ptr<Policy> snapshot() const = 0;
  virtual std::int64_t steps_seen() const = 0;
  virtual double last_loss() const = 0;
  virtual std::string checkpoint_json() const = 0;
};

// `partner_role` designates the other agent whose effective actions are
// folded into the observation features (the victim tracks the attacker and
// vice versa).
std::unique_ptr<Learner> make_learner(const MarkovGame& game, int self_role,
                                      int partner_role,
                                      const LearnerConfig& config,
                                      std::uint64_t seed);

// Rebuilds a learner from Learner::checkpoint_json output. Throws
// std::invalid_argument when the payload is not a v1 checkpoint for `game`.
// The replay buffer is intentionally not serialized; a resumed value-net
// learner refills it from fresh experience.
std::unique_ptr<Learner> learner_from_checkpoint(const MarkovGame& game,
                                                 const std::string& text);

// Frozen greedy policy from a checkpoint (equivalent to loading the learner
// and taking a snapshot).
std::unique_ptr<Policy> policy_from_checkpoint(const MarkovGame& game,
                                               const std::string& text);

}  // namespace scablab::learn

#endif  // SCABLAB_LEARN_LEARNERS_HPP_
