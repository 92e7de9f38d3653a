// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#include "scablab/learn/small_net.hpp"

#include <cmath>
#include <stdexcept>

namespace scablab::learn {

namespace {

double activate(const std::string& tag, double x) {
  if (tag == "tanh") return std::tanh(x);
  if (tag == "relu") return x > 0.0 ? x : 0.0;
  throw std::invalid_argument("small_net: unknown activation " + tag);
}

double activate_grad(const std::string& tag, double pre, double post) {
  if (tag == "tanh") return 1.0 - post * post;
  if (tag == "relu") return pre > 0.0 ? 1.0 : 0.0;
  throw std::invalid_argument("small_net: unknown activation " + tag);
}

}  // namespace

SmallNet::SmallNet(SmallNetSpec spec, RngStream& rng) : spec_(std::move(spec)) {
  if (spec_.input_dim < 1 || spec_.output_dim < 1) {
    throw std::invalid_argument("small_net: bad dimensions");
  }
  dims_.push_back(spec_.input_dim);
  for (int h : spec_.hidden) {
    if (h < 1) throw std::invalid_argument("small_net: bad hidden width");
    dims_.push_back(h);
  }
  dims_.push_back(spec_.output_dim);

  std::size_t count = 0;
  for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
    count += static_cast<std::size_t>(dims_[l]) *
                 static_cast<std::size_t>(dims_[l + 1]) +
             static_cast<std::size_t>(dims_[l + 1]);
  }
  params_.resize(count);
  // Xavier-uniform weights, zero biases.
  std::size_t at = 0;
  for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
    const int fan_in = dims_[l];
    const int fan_out = dims_[l + 1];
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    for (int i = 0; i < fan_in * fan_out; ++i) {
      params_[at++] = rng.uniform(-bound, bound);
    }
    for (int i = 0; i < fan_out; ++i) params_[at++] = 0.0;
  }
}

std::vector<double> SmallNet::forward(std::span<const double> input) const {
  Tape tape;
  return forward_tape(input, tape);
}

std::vector<double> SmallNet::forward_tape(std::span<const double> input,
                                           Tape& tape) const {
  if (static_cast<int>(input.size()) != spec_.input_dim) {
    throw std::invalid_argument("small_net: input dimension mismatch");
  }
  tape.input.assign(input.begin(), input.end());
  tape.pre.clear();
  tape.post.clear();

  std::vector<double> cur(input.begin(), input.end());
  std::size_t at = 0;
  const std::size_t layers = dims_.size() - 1;
  for (std::size_t l = 0; l < layers; ++l) {
    const int in = dims_[l];
    const int out = dims_[l + 1];
    std::vector<double> pre(static_cast<std::size_t>(out), 0.0);
    const double* w = params_.data() + at;
    const double* b = w + static_cast<std::size_t>(in) * out;
    for (int o = 0; o < out; ++o) {
      double sum = b[o];
      const double* row = w + static_cast<std::size_t>(o) * in;
      for (int i = 0; i < in; ++i) sum += row[i] * cur[static_cast<std::size_t>(i)];
      pre[static_cast<std::size_t>(o)] = sum;
    }
    at += static_cast<std::size_t>(in) * out + out;

    const bool last = l + 1 == layers;
    std::vector<double> post = pre;
    if (!last) {
      for (auto& v : post) v = activate(spec_.activation, v);
    }
    tape.pre.push_back(std::move(pre));
    cur = post;
    tape.post.push_back(std::move(post));
  }
  return cur;
}

void SmallNet::backward(const Tape& tape, std::span<const double> grad_out,
                        std::vector<double>& grad) const {
  if (grad.size() != params_.size()) grad.assign(params_.size(), 0.0);
  if (static_cast<int>(grad_out.size()) != spec_.output_dim) {
    throw std::invalid_argument("small_net: output gradient mismatch");
  }
  const std::size_t layers = dims_.size() - 1;

  // Per-layer parameter offsets.
  std::vector<std::size_t> offs(layers);
  std::size_t at = 0;
  for (std::size_t l = 0; l < layers; ++l) {
    offs[l] = at;
    at += static_cast<std::size_t>(dims_[l]) * dims_[l + 1] + dims_[l + 1];
  }

  std::vector<double> delta(grad_out.begin(), grad_out.end());
  for (std::size_t l = layers; l-- > 0;) {
    const int in = dims_[l];
    const int out = dims_[l + 1];
    const bool last = l + 1 == layers;
    if (!last) {
      for (int o = 0; o < out; ++o) {
        delta[static_cast<std::size_t>(o)] *=
            activate_grad(spec_.activation, tape.pre[l][static_cast<std::size_t>(o)],
                          tape.post[l][static_cast<std::size_t>(o)]);
      }
    }
    const std::vector<double>& below =
        l == 0 ? tape.input : tape.post[l - 1];
    double* gw = grad.data() + offs[l];
    double* gb = gw + static_cast<std::size_t>(in) * out;
    for (int o = 0; o < out; ++o) {
      const double d = delta[static_cast<std::size_t>(o)];
      double* grow = gw + static_cast<std::size_t>(o) * in;
      for (int i = 0; i < in; ++i) grow[i] += d * below[static_cast<std::size_t>(i)];
      gb[o] += d;
    }
    if (l > 0) {
      const double* w = params_.data() + offs[l];
      std::vector<double> next(static_cast<std::size_t>(in), 0.0);
      for (int o = 0; o < out; ++o) {
        const double d = delta[static_cast<std::size_t>(o)];
        const double* row = w + static_cast<std::size_t>(o) * in;
        for (int i = 0; i < in; ++i) next[static_cast<std::size_t>(i)] += d * row[i];
      }
      delta = std::move(next);
    }
  }
}

void SmallNet::apply_gradient(std::span<const double> grad, double alpha) {
  if (grad.size() != params_.size()) {
    throw std::invalid_argument("small_net: gradient size mismatch");
  }
  for (std::size_t i = 0; i < params_.size(); ++i) params_[i] -= alpha * grad[i];
}

}  // namespace scablab::learn
