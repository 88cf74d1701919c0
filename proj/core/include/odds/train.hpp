#pragma once

// The combined training objective over human, synthetic, and pairwise
// supervision, and a deterministic full-batch gradient-descent loop for the
// affine softmax head.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "odds/bin.hpp"
#include "odds/head.hpp"

namespace odds {

struct TrainConfig {
  double beta1 = 1.0;          // weight of the synthetic direct term
  double beta2 = 10.0;         // weight of the pairwise rank term
  double margin_delta = 0.1;   // hinge margin, in (0,1)
  QuantizeParams sigma{0.05};  // used when callers quantize scalar targets
  double learning_rate = 0.5;
  double momentum = 0.0;
  std::size_t steps = 200;
  std::uint64_t seed = 42;
  // Integer duplication factors applied per source before the seeded shuffle.
  std::size_t upsample_human = 1;
  std::size_t upsample_synthetic = 1;
  std::size_t upsample_pairwise = 1;
};

void validate_config(const TrainConfig& config);

struct DirectExample {
  FeatureVector x;
  BinDistribution target;
};

struct PairExample {
  FeatureVector a, b;
  int order_sign;  // +1 when a should score higher
};

struct TrainingData {
  std::vector<DirectExample> human;
  std::vector<DirectExample> synthetic;
  std::vector<PairExample> pairwise;
};

struct LossReport {
  double total = 0.0;
  double direct_human = 0.0;      // mean KL over the human batch
  double direct_synthetic = 0.0;  // mean KL over the synthetic batch
  double rank = 0.0;              // mean hinge over the pairwise batch
};

// Per-term batch means; total = direct_human + beta1 * direct_synthetic +
// beta2 * rank. Empty batches contribute zero; all three empty is an error.
LossReport combined_loss(const TrainingData& data, const HeadParams& head,
                         const BinSchema& schema, const TrainConfig& config);

struct TrainResult {
  HeadParams params;
  std::vector<LossReport> history;  // one report per step, pre-update
};

// Deterministic given seed and data order. The head starts at zero, each
// step takes one full-batch gradient step (optional momentum), and a
// non-finite loss raises NumericError naming the step. Terms with a zero
// coefficient are skipped entirely, so e.g. beta2 = 0 yields bitwise
// identical parameters with or without pairwise data.
TrainResult train(const TrainingData& data, const BinSchema& schema,
                  const TrainConfig& config);

}  // namespace odds
