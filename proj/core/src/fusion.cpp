#include "odds/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "odds/errors.hpp"

namespace odds {

void validate_annotation_set(const SyntheticAnnotationSet& set) {
  if (set.estimates.empty()) {
    throw ValidationError("annotation set '" + set.instance_id + "' has no estimates");
  }
  if (set.confidences.size() != set.estimates.size()) {
    throw ValidationError("annotation set '" + set.instance_id +
                          "' has mismatched estimate/confidence counts");
  }
  if (!set.rationales.empty() && set.rationales.size() != set.estimates.size()) {
    throw ValidationError("annotation set '" + set.instance_id +
                          "' has mismatched rationale count");
  }
  for (double y : set.estimates) {
    if (!(y >= 0.0 && y <= 1.0)) {
      throw ValidationError("annotation set '" + set.instance_id +
                            "' has an estimate outside [0,1]");
    }
  }
  for (double c : set.confidences) {
    if (!(c >= 0.0 && c <= 1.0)) {
      throw ValidationError("annotation set '" + set.instance_id +
                            "' has a confidence outside [0,1]");
    }
  }
}

double discrepancy(const std::vector<double>& estimates) {
  if (estimates.empty()) throw ValidationError("discrepancy of an empty estimate list");
  const auto [lo, hi] = std::minmax_element(estimates.begin(), estimates.end());
  return *hi - *lo;
}

std::pair<std::vector<SyntheticAnnotationSet>, std::vector<SyntheticAnnotationSet>>
partition_by_agreement(const std::vector<SyntheticAnnotationSet>& sets,
                       double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ValidationError("discrepancy threshold must lie in [0,1]");
  }
  std::pair<std::vector<SyntheticAnnotationSet>, std::vector<SyntheticAnnotationSet>> out;
  for (const SyntheticAnnotationSet& set : sets) {
    if (discrepancy(set.estimates) <= threshold) {
      out.first.push_back(set);
    } else {
      out.second.push_back(set);
    }
  }
  return out;
}

std::vector<double> confidence_weights(const std::vector<double>& confidences,
                                       double alpha) {
  if (confidences.empty()) throw ValidationError("no confidences to weight");
  if (!(alpha >= 0.0)) throw ValidationError("alpha must be non-negative");
  const std::size_t k = confidences.size();
  std::vector<double> weights(k);
  if (alpha == 0.0) {
    std::fill(weights.begin(), weights.end(), 1.0 / static_cast<double>(k));
    return weights;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    weights[i] = std::pow(confidences[i], alpha);
    sum += weights[i];
  }
  if (sum <= 0.0) {
    throw ValidationError(
        "all confidences are zero with alpha > 0; retry with alpha = 0 for "
        "uniform weights");
  }
  for (double& w : weights) w /= sum;
  return weights;
}

BinDistribution fuse_confidence_weighted(const SyntheticAnnotationSet& set,
                                         const FusionConfig& config,
                                         const BinSchema& schema) {
  validate_annotation_set(set);
  const std::vector<double> weights = confidence_weights(set.confidences, config.alpha);
  BinDistribution out;
  out.probs.assign(schema.n_bins, 0.0);
  for (std::size_t k = 0; k < set.estimates.size(); ++k) {
    const BinDistribution component =
        quantize_scalar(set.estimates[k], config.sigma, schema);
    for (std::size_t j = 0; j < schema.n_bins; ++j) {
      out.probs[j] += weights[k] * component.probs[j];
    }
  }
  return out;
}

double LogisticMap::forward(double x) const {
  if (!(scale > 0.0)) throw ValidationError("logistic scale must be positive");
  const double z = (x - offset) / scale;
  // Evaluate from the side that avoids overflow.
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

LogisticMap::Inverse LogisticMap::inverse(double p) const {
  if (!(scale > 0.0)) throw ValidationError("logistic scale must be positive");
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError("logit input must lie in [0,1], got " + std::to_string(p));
  }
  constexpr double kEps = 1e-6;
  Inverse out;
  double clamped = p;
  if (p < kEps) {
    clamped = kEps;
    out.clipped = true;
  } else if (p > 1.0 - kEps) {
    clamped = 1.0 - kEps;
    out.clipped = true;
  }
  out.value = offset + scale * (std::log(clamped) - std::log1p(-clamped));
  return out;
}

}  // namespace odds
