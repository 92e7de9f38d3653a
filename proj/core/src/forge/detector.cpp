// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#include "scablab/forge/detector.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "scablab/digest.hpp"
#include "scablab/envs/registry.hpp"
#include "scablab/episode.hpp"

namespace scablab::forge {

using nlohmann::json;

std::vector<double> detector_features(const MarkovGame& game, int target_role,
                                      ObsWindow window) {
  if (window.size() < 2) {
    throw std::invalid_argument("detector_features: need at least 2 frames");
  }
  std::vector<double> features;
  for (std::size_t i = 1; i < window.size(); ++i) {
    const auto prev = game.tracked_coords(window[i - 1], target_role);
    const auto cur = game.tracked_coords(window[i], target_role);
    if (prev.size() != cur.size()) {
      throw std::logic_error("detector_features: coord arity changed");
    }
    for (std::size_t d = 0; d < cur.size(); ++d) {
      features.push_back(cur[d] - prev[d]);
    }
  }
  return features;
}

namespace {

bool window_all_valid(const MarkovGame& game, ObsWindow window) {
  for (std::size_t i = 1; i < window.size(); ++i) {
    if (!game.window_valid(window[i - 1], window[i])) return false;
  }
  return true;
}

// Effective action of `target_role` over the window's final frame pair.
Action effective_label(const MarkovGame& game, int target_role,
                       const Observation& prev, const Observation& cur) {
  const auto before = game.tracked_coords(prev, target_role);
  const auto after = game.tracked_coords(cur, target_role);
  std::vector<double> delta(after.size());
  for (std::size_t d = 0; d < after.size(); ++d) {
    delta[d] = after[d] - before[d];
  }
  return game.action_from_coord_delta(delta);
}

}  // namespace

DetectorDataset generate_detector_dataset(const MarkovGame& game,
                                          int n_samples, int k,
                                          std::uint64_t seed,
                                          int observer_role, int target_role) {
  if (n_samples < 1) {
    throw std::invalid_argument("detector dataset: n_samples must be >= 1");
  }
  if (k < 2) throw std::invalid_argument("detector dataset: k must be >= 2");

  const auto target_space = game.action_space(target_role);
  DetectorDataset data;
  data.game = game.name();
  data.observer_role = observer_role;
  data.target_role = target_role;
  data.k = k;
  data.continuous = target_space.kind == ActionSpace::Kind::kContinuous;
  data.num_classes = data.continuous ? 0 : target_space.size();
  data.target_dim = data.continuous ? target_space.dim : 0;
  data.low = target_space.low;
  data.high = target_space.high;

  std::vector<std::unique_ptr<Policy>> randoms;
  std::vector<Policy*> seats;
  for (int r = 0; r < game.num_roles(); ++r) {
    randoms.push_back(envs::make_random_policy(game.action_space(r)));
    seats.push_back(randoms.back().get());
  }

  EpisodeOptions opts;
  opts.verbose_frames = true;
  const std::uint64_t episode_guard =
      static_cast<std::uint64_t>(n_samples) * 4 + 1000;
  for (std::uint64_t episode = 0;
       static_cast<int>(data.samples.size()) < n_samples; ++episode) {
    if (episode > episode_guard) {
      throw std::runtime_error(
          "detector dataset: games yield almost no valid windows");
    }
    const auto trace = run_episode(
        game, seats, derive_seed(seed, "detector/episode", episode), {}, opts);
    std::vector<Observation> obs;
    obs.reserve(trace.frames.size());
    for (std::size_t t = 0; t < trace.frames.size(); ++t) {
      obs.push_back(Observation{
          observer_role, static_cast<int>(t),
          trace.frames[t][static_cast<std::size_t>(observer_role)]});
    }
    for (std::size_t t = static_cast<std::size_t>(k) - 1;
         t < obs.size() &&
         static_cast<int>(data.samples.size()) < n_samples;
         ++t) {
      const ObsWindow window(&obs[t + 1 - static_cast<std::size_t>(k)],
                             static_cast<std::size_t>(k));
      if (!window_all_valid(game, window)) continue;
      DetectorSample sample;
      sample.features = detector_features(game, target_role, window);
      data.feature_dim = static_cast<int>(sample.features.size());
      const Action label =
          effective_label(game, target_role, window[window.size() - 2],
                          window[window.size() - 1]);
      if (data.continuous) {
        sample.target = label.box;
      } else {
        sample.label = label.discrete;
      }
      data.samples.push_back(std::move(sample));
    }
  }
  return data;
}

std::pair<DetectorDataset, DetectorDataset> split_dataset(
    const DetectorDataset& dataset, double holdout_fraction,
    std::uint64_t seed) {
  if (holdout_fraction <= 0.0 || holdout_fraction >= 1.0) {
    throw std::invalid_argument("split_dataset: bad holdout fraction");
  }
  std::vector<std::size_t> order(dataset.samples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  RngStream rng(seed, "detector/split");
  // Fisher-Yates with the counter-based stream.
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.next_below(i)]);
  }
  DetectorDataset train = dataset;
  DetectorDataset holdout = dataset;
  train.samples.clear();
  holdout.samples.clear();
  const auto cut = static_cast<std::size_t>(
      static_cast<double>(order.size()) * (1.0 - holdout_fraction));
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < cut ? train : holdout).samples.push_back(dataset.samples[order[i]]);
  }
  return {std::move(train), std::move(holdout)};
}

Detector::Result Detector::predict(std::span<const double> features) const {
  if (static_cast<int>(features.size()) != feature_dim_) {
    throw std::invalid_argument("detector: feature dimension mismatch");
  }
  std::vector<double> out(static_cast<std::size_t>(num_outputs_), 0.0);
  for (int o = 0; o < num_outputs_; ++o) {
    double v = bias_[static_cast<std::size_t>(o)];
    const double* row =
        &weights_[static_cast<std::size_t>(o) *
                  static_cast<std::size_t>(feature_dim_)];
    for (int f = 0; f < feature_dim_; ++f) {
      v += row[f] * features[static_cast<std::size_t>(f)];
    }
    out[static_cast<std::size_t>(o)] = v;
  }

  Result res;
  if (continuous_) {
    for (auto& v : out) v = std::clamp(v, low_, high_);
    res.action = Action::of(out);
    res.confidence = 1.0;
    return res;
  }
  const double m = *std::max_element(out.begin(), out.end());
  double sum = 0.0;
  int best = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::exp(out[i] - m);
    sum += out[i];
    if (out[i] > out[static_cast<std::size_t>(best)]) {
      best = static_cast<int>(i);
    }
  }
  res.action = Action::of(best);
  res.confidence = out[static_cast<std::size_t>(best)] / sum;
  return res;
}

Detector::Result Detector::detect(const MarkovGame& game,
                                  ObsWindow window) const {
  if (static_cast<int>(window.size()) != k_) {
    throw std::invalid_argument("detector: window length != k");
  }
  for (const auto& obs : window) {
    if (obs.role != observer_role_) {
      throw std::invalid_argument("detector: window from the wrong role");
    }
  }
  if (!window_all_valid(game, window)) {
    // Straddles a reset: nothing can be inferred. Report the first action
    // with zero confidence; callers treat this as a mismatch.
    Result res;
    res.action = continuous_
                     ? Action::of(std::vector<double>(
                           static_cast<std::size_t>(num_outputs_), 0.0))
                     : Action::of(0);
    res.confidence = 0.0;
    return res;
  }
  return predict(detector_features(game, target_role_, window));
}

namespace {

// Solves (A + ridge*I) x = b in place; A is n x n row-major.
std::vector<double> solve_ridge(std::vector<double> a, std::vector<double> b,
                                int n, double ridge) {
  for (int i = 0; i < n; ++i) {
    a[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
      static_cast<std::size_t>(i)] += ridge;
  }
  // Gaussian elimination with partial pivoting; n is tiny.
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a[static_cast<std::size_t>(r) * n + col]) >
          std::abs(a[static_cast<std::size_t>(pivot) * n + col])) {
        pivot = r;
      }
    }
    if (std::abs(a[static_cast<std::size_t>(pivot) * n + col]) < 1e-12) {
      throw std::runtime_error("detector: singular normal equations");
    }
    if (pivot != col) {
      for (int c = 0; c < n; ++c) {
        std::swap(a[static_cast<std::size_t>(col) * n + c],
                  a[static_cast<std::size_t>(pivot) * n + c]);
      }
      std::swap(b[static_cast<std::size_t>(col)],
                b[static_cast<std::size_t>(pivot)]);
    }
    const double inv = 1.0 / a[static_cast<std::size_t>(col) * n + col];
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double factor = a[static_cast<std::size_t>(r) * n + col] * inv;
      if (factor == 0.0) continue;
      for (int c = col; c < n; ++c) {
        a[static_cast<std::size_t>(r) * n + c] -=
            factor * a[static_cast<std::size_t>(col) * n + c];
      }
      b[static_cast<std::size_t>(r)] -= factor * b[static_cast<std::size_t>(col)];
    }
  }
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    x[static_cast<std::size_t>(i)] =
        b[static_cast<std::size_t>(i)] / a[static_cast<std::size_t>(i) * n + i];
  }
  return x;
}

}  // namespace

Detector train_detector(const DetectorDataset& dataset, int k,
                        std::uint64_t seed) {
  (void)seed;  // both heads train deterministically from zero init
  if (dataset.samples.empty()) {
    throw std::invalid_argument("train_detector: empty dataset");
  }
  if (k != dataset.k) {
    throw std::invalid_argument("train_detector: k disagrees with dataset");
  }

  Detector det;
  det.k_ = dataset.k;
  det.observer_role_ = dataset.observer_role;
  det.target_role_ = dataset.target_role;
  det.continuous_ = dataset.continuous;
  det.feature_dim_ = dataset.feature_dim;
  det.low_ = dataset.low;
  det.high_ = dataset.high;

  const auto n = dataset.samples.size();
  const int dim = dataset.feature_dim;

  if (dataset.continuous) {
    det.num_outputs_ = dataset.target_dim;
    // Ridge least squares with intercept via normal equations on the
    // augmented feature [x, 1].
    const int aug = dim + 1;
    std::vector<double> gram(static_cast<std::size_t>(aug) * aug, 0.0);
    std::vector<std::vector<double>> rhs(
        static_cast<std::size_t>(dataset.target_dim),
        std::vector<double>(static_cast<std::size_t>(aug), 0.0));
    std::vector<double> x(static_cast<std::size_t>(aug), 1.0);
    for (const auto& sample : dataset.samples) {
      std::copy(sample.features.begin(), sample.features.end(), x.begin());
      x[static_cast<std::size_t>(dim)] = 1.0;
      for (int i = 0; i < aug; ++i) {
        for (int j = 0; j < aug; ++j) {
          gram[static_cast<std::size_t>(i) * aug + j] +=
              x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
        }
        for (int o = 0; o < dataset.target_dim; ++o) {
          rhs[static_cast<std::size_t>(o)][static_cast<std::size_t>(i)] +=
              x[static_cast<std::size_t>(i)] *
              sample.target[static_cast<std::size_t>(o)];
        }
      }
    }
    det.weights_.assign(
        static_cast<std::size_t>(dataset.target_dim) * dim, 0.0);
    det.bias_.assign(static_cast<std::size_t>(dataset.target_dim), 0.0);
    for (int o = 0; o < dataset.target_dim; ++o) {
      const auto sol =
          solve_ridge(gram, rhs[static_cast<std::size_t>(o)], aug, 1e-8);
      for (int f = 0; f < dim; ++f) {
        det.weights_[static_cast<std::size_t>(o) * dim + f] =
            sol[static_cast<std::size_t>(f)];
      }
      det.bias_[static_cast<std::size_t>(o)] = sol[static_cast<std::size_t>(dim)];
    }
    return det;
  }

  std::set<int> distinct;
  for (const auto& sample : dataset.samples) distinct.insert(sample.label);
  if (distinct.size() < 2) {
    throw std::invalid_argument("train_detector: single-class dataset");
  }
  const int classes = dataset.num_classes;
  det.num_outputs_ = classes;
  det.weights_.assign(static_cast<std::size_t>(classes) * dim, 0.0);
  det.bias_.assign(static_cast<std::size_t>(classes), 0.0);

  // Full-batch softmax regression. The problem is convex and the built-in
  // games are separable in delta space, so plain GD walks straight in.
  const int epochs = 400;
  const double lr = 0.5;
  std::vector<double> logits(static_cast<std::size_t>(classes));
  std::vector<double> gw(det.weights_.size());
  std::vector<double> gb(det.bias_.size());
  for (int epoch = 0; epoch < epochs; ++epoch) {
    std::fill(gw.begin(), gw.end(), 0.0);
    std::fill(gb.begin(), gb.end(), 0.0);
    for (const auto& sample : dataset.samples) {
      for (int c = 0; c < classes; ++c) {
        double v = det.bias_[static_cast<std::size_t>(c)];
        for (int f = 0; f < dim; ++f) {
          v += det.weights_[static_cast<std::size_t>(c) * dim + f] *
               sample.features[static_cast<std::size_t>(f)];
        }
        logits[static_cast<std::size_t>(c)] = v;
      }
      const double m = *std::max_element(logits.begin(), logits.end());
      double sum = 0.0;
      for (auto& v : logits) {
        v = std::exp(v - m);
        sum += v;
      }
      for (int c = 0; c < classes; ++c) {
        const double p = logits[static_cast<std::size_t>(c)] / sum;
        const double err = p - (c == sample.label ? 1.0 : 0.0);
        gb[static_cast<std::size_t>(c)] += err;
        for (int f = 0; f < dim; ++f) {
          gw[static_cast<std::size_t>(c) * dim + f] +=
              err * sample.features[static_cast<std::size_t>(f)];
        }
      }
    }
    const double scale = lr / static_cast<double>(n);
    for (std::size_t i = 0; i < gw.size(); ++i) det.weights_[i] -= scale * gw[i];
    for (std::size_t i = 0; i < gb.size(); ++i) det.bias_[i] -= scale * gb[i];
  }
  return det;
}

double evaluate_detector(const Detector& detector,
                         const DetectorDataset& dataset, double tolerance) {
  if (dataset.samples.empty()) {
    throw std::invalid_argument("evaluate_detector: empty dataset");
  }
  std::size_t correct = 0;
  for (const auto& sample : dataset.samples) {
    const auto res = detector.predict(sample.features);
    if (detector.continuous()) {
      double sup = 0.0;
      for (std::size_t d = 0; d < sample.target.size(); ++d) {
        sup = std::max(sup, std::abs(res.action.box[d] - sample.target[d]));
      }
      correct += sup <= tolerance ? 1 : 0;
    } else {
      correct += res.action.discrete == sample.label ? 1 : 0;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(dataset.samples.size());
}

std::string Detector::to_json() const {
  json j;
  j["version"] = 1;
  j["kind"] = continuous_ ? "continuous" : "discrete";
  j["k"] = k_;
  j["observer_role"] = observer_role_;
  j["target_role"] = target_role_;
  j["feature_dim"] = feature_dim_;
  j["num_outputs"] = num_outputs_;
  j["low"] = low_;
  j["high"] = high_;
  j["weights"] = doubles_to_base64(weights_);
  j["bias"] = doubles_to_base64(bias_);
  return j.dump();
}

Detector Detector::from_json(const std::string& text) {
  const json j = json::parse(text);
  if (j.at("version").get<int>() != 1) {
    throw std::invalid_argument("detector: unknown version");
  }
  Detector det;
  det.continuous_ = j.at("kind").get<std::string>() == "continuous";
  det.k_ = j.at("k").get<int>();
  det.observer_role_ = j.at("observer_role").get<int>();
  det.target_role_ = j.at("target_role").get<int>();
  det.feature_dim_ = j.at("feature_dim").get<int>();
  det.num_outputs_ = j.at("num_outputs").get<int>();
  det.low_ = j.at("low").get<double>();
  det.high_ = j.at("high").get<double>();
  det.weights_ = base64_to_doubles(j.at("weights").get<std::string>());
  det.bias_ = base64_to_doubles(j.at("bias").get<std::string>());
  if (det.weights_.size() != static_cast<std::size_t>(det.num_outputs_) *
                                 static_cast<std::size_t>(det.feature_dim_) ||
      det.bias_.size() != static_cast<std::size_t>(det.num_outputs_)) {
    throw std::invalid_argument("detector: weight shape mismatch");
  }
  return det;
}

}  // namespace scablab::forge
