#pragma once

// Turning recorded multi-model rollouts into training targets: discrepancy
// filtering, confidence-weighted mixtures of quantized estimates, and the
// logistic/logit transform pair used to undo logistic annotation scales.

#include <string>
#include <utility>
#include <vector>

#include "odds/bin.hpp"

namespace odds {

struct SyntheticAnnotationSet {
  std::string instance_id;
  std::vector<double> estimates;    // K probability estimates in [0,1]
  std::vector<double> confidences;  // K judge confidences in [0,1]
  std::vector<std::string> rationales;  // empty, or one per estimate
};

void validate_annotation_set(const SyntheticAnnotationSet& set);

struct FusionConfig {
  double alpha = 2.0;                // confidence sharpening power, >= 0
  double discrepancy_threshold = 0.2;
  QuantizeParams sigma{0.05};
};

// Max minus min of the estimates; 0 for a singleton.
double discrepancy(const std::vector<double>& estimates);

// Stable split into (low, high): low iff discrepancy <= threshold.
std::pair<std::vector<SyntheticAnnotationSet>, std::vector<SyntheticAnnotationSet>>
partition_by_agreement(const std::vector<SyntheticAnnotationSet>& sets,
                       double threshold);

// Power-normalized weights c_k^alpha / sum_j c_j^alpha. alpha = 0 gives
// uniform weights regardless of the confidences; all-zero confidences with
// alpha > 0 is an error (retry with alpha = 0 for uniform weights).
std::vector<double> confidence_weights(const std::vector<double>& confidences,
                                       double alpha);

// Mixture of the per-estimate quantized Gaussians under confidence_weights.
BinDistribution fuse_confidence_weighted(const SyntheticAnnotationSet& set,
                                         const FusionConfig& config,
                                         const BinSchema& schema);

// Monotone bijection pair: forward squashes the real line into (0,1), inverse
// recovers the pre-squash value. Inputs at 0 or 1 in the inverse direction are
// clipped to [1e-6, 1 - 1e-6] and flagged.
struct LogisticMap {
  double scale = 1.0;
  double offset = 0.0;

  double forward(double x) const;

  struct Inverse {
    double value = 0.0;
    bool clipped = false;
  };
  Inverse inverse(double p) const;
};

}  // namespace odds
