// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCABLAB_LEARN_SMALL_NET_HPP_
#define SCABLAB_LEARN_SMALL_NET_HPP_

#include <span>
#include <string>
#include <vector>

#include "scablab/rng.hpp"

namespace scablab::learn {

struct SmallNetSpec {
  int input_dim = 1;
  std::vector<int> hidden = {32};
  int output_dim = 1;
  std::string activation = "tanh";  // hidden layers; output is linear
};

// Dense feedforward net with a flat parameter vector and hand-rolled
// backprop, trained by plain SGD. Small and auditable by design: the
// gradient tests check it against central finite differences, so avoid
// anything clever here.
class SmallNet {
 public:
  SmallNet() = default;
  SmallNet(SmallNetSpec spec, RngStream& rng);

  std::vector<double> forward(std::span<const double> input) const;

  // Activations recorded by forward_tape, consumed by backward.
  struct Tape {
    std::vector<double> input;
    std::vector<std::vector<double>> pre;   // pre-activation per layer
    std::vector<std::vector<double>> post;  // post-activation per layer
  };
  std::vector<double> forward_tape(std::span<const double> input,
                                   Tape& tape) const;
  // Accumulates d(loss)/d(params) into grad given d(loss)/d(output).
  void backward(const Tape& tape, std::span<const double> grad_out,
                std::vector<double>& grad) const;

  void apply_gradient(std::span<const double> grad, double alpha);

  const SmallNetSpec& spec() const { return spec_; }
  int param_count() const { return static_cast<int>(params_.size()); }
  const std::vector<double>& params() const { return params_; }
  std::vector<double>& params() { return params_; }

 private:
  SmallNetSpec spec_;
  std::vector<int> dims_;  // input_dim, hidden..., output_dim
  std::vector<double> params_;
};

}  // namespace scablab::learn

#endif  // SCABLAB_LEARN_SMALL_NET_HPP_
