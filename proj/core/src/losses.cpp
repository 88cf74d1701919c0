#include "odds/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "odds/errors.hpp"
#include "odds/head.hpp"

namespace odds {
namespace {

void check_logits(const std::vector<double>& logits, const BinSchema& schema) {
  if (logits.size() != schema.n_bins) {
    throw ValidationError("got " + std::to_string(logits.size()) +
                          " logits for a schema with " +
                          std::to_string(schema.n_bins) + " bins");
  }
}

// Stable log softmax.
std::vector<double> log_softmax(const std::vector<double>& logits) {
  double max_logit = logits[0];
  for (double z : logits) {
    if (!std::isfinite(z)) throw NumericError("non-finite logits");
    max_logit = std::max(max_logit, z);
  }
  double sum = 0.0;
  for (double z : logits) sum += std::exp(z - max_logit);
  const double lse = max_logit + std::log(sum);
  std::vector<double> out(logits.size());
  for (std::size_t j = 0; j < logits.size(); ++j) out[j] = logits[j] - lse;
  return out;
}

}  // namespace

DecodeGrad expected_decode_from_logits(const std::vector<double>& logits,
                                       const BinSchema& schema) {
  check_logits(logits, schema);
  const BinDistribution p = softmax(logits);
  DecodeGrad out;
  out.value = 0.0;
  for (std::size_t j = 0; j < schema.n_bins; ++j) {
    out.value += p.probs[j] * schema.centers[j];
  }
  out.grad.resize(schema.n_bins);
  for (std::size_t j = 0; j < schema.n_bins; ++j) {
    out.grad[j] = p.probs[j] * (schema.centers[j] - out.value);
  }
  return out;
}

LossGrad kl_direct_loss(const BinDistribution& target,
                        const std::vector<double>& logits) {
  if (target.probs.size() != logits.size()) {
    throw ValidationError("target distribution and logits differ in length");
  }
  const std::vector<double> logp = log_softmax(logits);
  LossGrad out;
  out.grad.resize(logits.size());
  for (std::size_t j = 0; j < logits.size(); ++j) {
    const double q = target.probs[j];
    if (!(q >= 0.0)) throw ValidationError("target distribution has negative mass");
    if (q > 0.0) {
      out.loss += q * (std::log(q) - logp[j]);
    }
    out.grad[j] = std::exp(logp[j]) - q;
  }
  return out;
}

PairLossGrad margin_rank_loss(const std::vector<double>& logits_a,
                              const std::vector<double>& logits_b,
                              int order_sign, double delta,
                              const BinSchema& schema) {
  if (order_sign != 1 && order_sign != -1) {
    throw ValidationError("order_sign must be +1 or -1");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ValidationError("margin delta must lie in (0,1)");
  }
  const DecodeGrad a = expected_decode_from_logits(logits_a, schema);
  const DecodeGrad b = expected_decode_from_logits(logits_b, schema);

  PairLossGrad out;
  out.decode_a = a.value;
  out.decode_b = b.value;
  out.grad_a.assign(schema.n_bins, 0.0);
  out.grad_b.assign(schema.n_bins, 0.0);
  const double raw = delta - order_sign * (a.value - b.value);
  if (raw > 0.0) {
    out.loss = raw;
    for (std::size_t j = 0; j < schema.n_bins; ++j) {
      out.grad_a[j] = -order_sign * a.grad[j];
      out.grad_b[j] = order_sign * b.grad[j];
    }
  }
  return out;
}

MseReference mse_loss_reference(const std::vector<double>& logits,
                                double target_scalar, const BinSchema& schema) {
  if (!(target_scalar >= 0.0 && target_scalar <= 1.0)) {
    throw ValidationError("target scalar must lie in [0,1]");
  }
  const DecodeGrad d = expected_decode_from_logits(logits, schema);
  const BinDistribution p = softmax(logits);
  MseReference out;
  const double err = d.value - target_scalar;
  out.loss = 0.5 * err * err;
  out.grad.resize(schema.n_bins);
  out.grad_approx.resize(schema.n_bins);
  for (std::size_t j = 0; j < schema.n_bins; ++j) {
    out.grad[j] = err * p.probs[j] * (schema.centers[j] - d.value);
    out.grad_approx[j] = err * p.probs[j] * (schema.centers[j] - target_scalar);
  }
  return out;
}

double grad_check(const std::function<double(const std::vector<double>&)>& f,
                  const std::vector<double>& point,
                  const std::vector<double>& analytic_grad, double epsilon) {
  if (!(epsilon >= 1e-7 && epsilon <= 1e-3)) {
    throw ValidationError("grad_check epsilon must lie in [1e-7, 1e-3]");
  }
  if (point.size() != analytic_grad.size()) {
    throw ValidationError("point and gradient differ in length");
  }
  double max_err = 0.0;
  std::vector<double> x = point;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + epsilon;
    const double hi = f(x);
    x[i] = saved - epsilon;
    const double lo = f(x);
    x[i] = saved;
    const double fd = (hi - lo) / (2.0 * epsilon);
    const double denom = std::max(1.0, std::abs(analytic_grad[i]));
    max_err = std::max(max_err, std::abs(fd - analytic_grad[i]) / denom);
  }
  return max_err;
}

}  // namespace odds
