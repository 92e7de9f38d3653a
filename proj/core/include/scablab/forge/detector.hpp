// Copyright 2026 The scablab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCABLAB_FORGE_DETECTOR_HPP_
#define SCABLAB_FORGE_DETECTOR_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "scablab/game.hpp"

namespace scablab::forge {

// Everything the detector sees: deltas of the target's tracked coordinates
// across a window of k observer observations, flattened oldest-pair first.
// (k-1) * coord_dim values.
std::vector<double> detector_features(const MarkovGame& game, int target_role,
                                      ObsWindow window);

struct DetectorSample {
  std::vector<double> features;
  int label = 0;               // discrete action index
  std::vector<double> target;  // continuous effective action
};

struct DetectorDataset {
  std::string game;
  int observer_role = 1;
  int target_role = 0;
  int k = 2;
  bool continuous = false;
  int feature_dim = 0;
  int num_classes = 0;  // discrete games
  int target_dim = 0;   // continuous games
  double low = -1.0;    // continuous action bounds, for clamping
  double high = 1.0;
  std::vector<DetectorSample> samples;
};

// Random-policy rollouts labeled with the target's *effective* action (what
// its tracked coordinates actually did — a blocked move labels as noop, and
// that is also all any observer could ever recover). Windows that straddle
// a board reset are skipped.
DetectorDataset generate_detector_dataset(const MarkovGame& game,
                                          int n_samples, int k,
                                          std::uint64_t seed,
                                          int observer_role = 1,
                                          int target_role = 0);

// Deterministic shuffle-and-cut; `holdout_fraction` of samples go second.
std::pair<DetectorDataset, DetectorDataset> split_dataset(
    const DetectorDataset& dataset, double holdout_fraction,
    std::uint64_t seed);

// Infers the target's previous action from the observer's last k
// observations. Multinomial logistic head for discrete games, ridge linear
// head for continuous ones; both operate on detector_features only, with no
// hidden state.
class Detector {
 public:
  struct Result {
    Action action;
    double confidence = 0.0;
  };

  Detector() = default;

  int k() const { return k_; }
  int observer_role() const { return observer_role_; }
  int target_role() const { return target_role_; }
  bool continuous() const { return continuous_; }

  // Pre: window holds exactly k observations of observer_role. Windows that
  // straddle a reset return confidence 0 (treated as mismatch upstream);
  // otherwise confidence is the top-class probability (discrete) or 1.
  Result detect(const MarkovGame& game, ObsWindow window) const;

  // Head applied to raw features; shared by detect and evaluation.
  Result predict(std::span<const double> features) const;

  std::string to_json() const;
  static Detector from_json(const std::string& text);

 private:
  friend Detector train_detector(const DetectorDataset& dataset, int k,
                                 std::uint64_t seed);

  int k_ = 2;
  int observer_role_ = 1;
  int target_role_ = 0;
  bool continuous_ = false;
  int feature_dim_ = 0;
  int num_outputs_ = 0;          // classes or box dims
  double low_ = -1.0;            // continuous clamp range
  double high_ = 1.0;
  std::vector<double> weights_;  // row-major [output][feature]
  std::vector<double> bias_;
};

// Multinomial logistic regression (full-batch gradient descent) or ridge
// least squares. Throws on an empty or single-class dataset and when `k`
// disagrees with the dataset.
Detector train_detector(const DetectorDataset& dataset, int k,
                        std::uint64_t seed);

// Fraction of samples the detector gets right. Discrete: exact class match.
// Continuous: prediction within sup-norm `tolerance` of the target.
double evaluate_detector(const Detector& detector,
                         const DetectorDataset& dataset,
                         double tolerance = 0.0);

}  // namespace scablab::forge

#endif  // SCABLAB_FORGE_DETECTOR_HPP_
