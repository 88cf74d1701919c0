#pragma once

// Loss terms over per-bin logits, each returning the analytic gradient it was
// trained with, plus a central finite-difference checker for all of them.

#include <functional>
#include <vector>

#include "odds/bin.hpp"

namespace odds {

struct LossGrad {
  double loss = 0.0;
  std::vector<double> grad;  // d loss / d logit
};

struct DecodeGrad {
  double value = 0.0;
  std::vector<double> grad;  // d decode / d logit_i = p_i (f(b_i) - decode)
};

// Expected decode of softmax(logits) together with its logit gradient.
DecodeGrad expected_decode_from_logits(const std::vector<double>& logits,
                                       const BinSchema& schema);

// Forward KL from the target distribution to softmax(logits), with the
// convention 0 log 0 = 0. Gradient wrt logit i is softmax(logits)_i - target_i.
LossGrad kl_direct_loss(const BinDistribution& target,
                        const std::vector<double>& logits);

struct PairLossGrad {
  double loss = 0.0;
  std::vector<double> grad_a, grad_b;
  double decode_a = 0.0, decode_b = 0.0;
};

// Hinge on the gap of expected decodes: max{0, delta - sign * (y_a - y_b)}.
// order_sign is +1 when a should score higher. In the clamped region
// (including the kink) both gradients are zero.
PairLossGrad margin_rank_loss(const std::vector<double>& logits_a,
                              const std::vector<double>& logits_b,
                              int order_sign, double delta,
                              const BinSchema& schema);

struct MseReference {
  double loss = 0.0;
  // Exact derivative: (decode - s) * p_i * (f(b_i) - decode).
  std::vector<double> grad;
  // A commonly quoted simplification anchors the bin distance at the target
  // scalar instead of the current decode, (decode - s) * p_i * (f(b_i) - s);
  // it agrees with `grad` only at decode == s and is kept for comparison.
  std::vector<double> grad_approx;
};

// Squared-error reference loss 1/2 (decode - s)^2 on the expected decode.
MseReference mse_loss_reference(const std::vector<double>& logits,
                                double target_scalar, const BinSchema& schema);

// Max over coordinates of |central difference - analytic| / max(1, |analytic|).
// epsilon must lie in [1e-7, 1e-3].
double grad_check(const std::function<double(const std::vector<double>&)>& f,
                  const std::vector<double>& point,
                  const std::vector<double>& analytic_grad, double epsilon);

}  // namespace odds
