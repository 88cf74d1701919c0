#pragma once

// A small differentiable probability head: an affine map from a feature
// vector to per-bin logits, followed by softmax. Also the deterministic
// hashed bag-of-tokens featurizer used when no precomputed features exist.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "odds/bin.hpp"

namespace odds {

struct FeatureVector {
  std::vector<double> values;
};

struct HeadParams {
  std::size_t dim = 0;          // feature dimension d
  std::size_t n_bins = 0;       // output bins N
  std::vector<double> weights;  // row-major d x N
  std::vector<double> bias;     // N
};

// Zero-initialized head.
HeadParams make_head(std::size_t dim, std::size_t n_bins);

void validate_head(const HeadParams& head);

// Per-bin logits W^T x + b. Throws ValidationError on dimension mismatch.
std::vector<double> head_logits(const HeadParams& head, const FeatureVector& x);

// Numerically stable softmax with strictly positive entries. Non-finite
// logits raise NumericError.
BinDistribution softmax(const std::vector<double>& logits);

BinDistribution forward(const HeadParams& head, const FeatureVector& x);

// Deterministic bag-of-tokens hashing of (context, proposition) into d
// buckets, l2-normalized. Tokens are lowercased [a-z0-9] runs; each side is
// hashed under its own field tag so context and proposition tokens do not
// collide. Stable across runs and platforms. Requires d >= 8 and at least
// one token overall.
FeatureVector hashed_featurizer(const std::string& context,
                                const std::string& proposition, std::size_t d,
                                std::uint64_t seed);

}  // namespace odds
