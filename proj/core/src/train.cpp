#include "odds/train.hpp"

#include <cmath>
#include <string>

#include "odds/errors.hpp"
#include "odds/losses.hpp"
#include "odds/random.hpp"

namespace odds {
namespace {

struct ParamGrad {
  std::vector<double> weights;
  std::vector<double> bias;
};

// Accumulates scale * d logits into the parameter gradient through the
// affine map logits = W^T x + b.
void backprop_logits(const FeatureVector& x, const std::vector<double>& dlogits,
                     double scale, ParamGrad& grad) {
  const std::size_t n_bins = dlogits.size();
  for (std::size_t j = 0; j < n_bins; ++j) {
    grad.bias[j] += scale * dlogits[j];
  }
  for (std::size_t i = 0; i < x.values.size(); ++i) {
    const double xi = x.values[i];
    if (xi == 0.0) continue;
    double* row = grad.weights.data() + i * n_bins;
    for (std::size_t j = 0; j < n_bins; ++j) {
      row[j] += scale * xi * dlogits[j];
    }
  }
}

double direct_term(const std::vector<DirectExample>& batch, const HeadParams& head,
                   const BinSchema& schema, ParamGrad* grad) {
  if (batch.empty()) return 0.0;
  const double inv = 1.0 / static_cast<double>(batch.size());
  double mean_loss = 0.0;
  for (const DirectExample& ex : batch) {
    validate_distribution(ex.target, schema);
    const std::vector<double> logits = head_logits(head, ex.x);
    const LossGrad lg = kl_direct_loss(ex.target, logits);
    mean_loss += inv * lg.loss;
    if (grad != nullptr) backprop_logits(ex.x, lg.grad, inv, *grad);
  }
  return mean_loss;
}

double rank_term(const std::vector<PairExample>& batch, const HeadParams& head,
                 const BinSchema& schema, const TrainConfig& config,
                 ParamGrad* grad) {
  if (batch.empty()) return 0.0;
  const double inv = 1.0 / static_cast<double>(batch.size());
  double mean_loss = 0.0;
  for (const PairExample& ex : batch) {
    const PairLossGrad pl =
        margin_rank_loss(head_logits(head, ex.a), head_logits(head, ex.b),
                         ex.order_sign, config.margin_delta, schema);
    mean_loss += inv * pl.loss;
    if (grad != nullptr && pl.loss > 0.0) {
      backprop_logits(ex.a, pl.grad_a, inv, *grad);
      backprop_logits(ex.b, pl.grad_b, inv, *grad);
    }
  }
  return mean_loss;
}

std::size_t feature_dim(const TrainingData& data) {
  if (!data.human.empty()) return data.human.front().x.values.size();
  if (!data.synthetic.empty()) return data.synthetic.front().x.values.size();
  if (!data.pairwise.empty()) return data.pairwise.front().a.values.size();
  throw ValidationError("all training batches are empty");
}

template <typename T>
std::vector<T> upsampled(const std::vector<T>& xs, std::size_t factor,
                         std::uint64_t seed, std::uint64_t stream) {
  std::vector<T> out;
  out.reserve(xs.size() * factor);
  for (std::size_t k = 0; k < factor; ++k) {
    out.insert(out.end(), xs.begin(), xs.end());
  }
  Rng rng = stream_rng(seed, stream);
  shuffle(out, rng);
  return out;
}

}  // namespace

void validate_config(const TrainConfig& config) {
  if (!(config.beta1 >= 0.0) || !(config.beta2 >= 0.0)) {
    throw ValidationError("beta coefficients must be non-negative");
  }
  if (!(config.margin_delta > 0.0 && config.margin_delta < 1.0)) {
    throw ValidationError("margin delta must lie in (0,1)");
  }
  if (!(config.sigma.sigma > 0.0)) {
    throw ValidationError("quantization sigma must be positive");
  }
  if (!(config.learning_rate > 0.0)) {
    throw ValidationError("learning rate must be positive");
  }
  if (!(config.momentum >= 0.0 && config.momentum < 1.0)) {
    throw ValidationError("momentum must lie in [0,1)");
  }
  if (config.steps < 1) throw ValidationError("steps must be at least 1");
  if (config.upsample_human < 1 || config.upsample_synthetic < 1 ||
      config.upsample_pairwise < 1) {
    throw ValidationError("upsample factors must be at least 1");
  }
}

LossReport combined_loss(const TrainingData& data, const HeadParams& head,
                         const BinSchema& schema, const TrainConfig& config) {
  validate_config(config);
  if (data.human.empty() && data.synthetic.empty() && data.pairwise.empty()) {
    throw ValidationError("all training batches are empty");
  }
  LossReport report;
  report.direct_human = direct_term(data.human, head, schema, nullptr);
  report.direct_synthetic = direct_term(data.synthetic, head, schema, nullptr);
  report.rank = rank_term(data.pairwise, head, schema, config, nullptr);
  report.total = report.direct_human + config.beta1 * report.direct_synthetic +
                 config.beta2 * report.rank;
  return report;
}

TrainResult train(const TrainingData& data, const BinSchema& schema,
                  const TrainConfig& config) {
  validate_config(config);
  const std::size_t dim = feature_dim(data);
  for (const DirectExample& ex : data.human) {
    if (ex.x.values.size() != dim) throw ValidationError("inconsistent feature dimensions");
  }
  for (const DirectExample& ex : data.synthetic) {
    if (ex.x.values.size() != dim) throw ValidationError("inconsistent feature dimensions");
  }
  for (const PairExample& ex : data.pairwise) {
    if (ex.a.values.size() != dim || ex.b.values.size() != dim) {
      throw ValidationError("inconsistent feature dimensions");
    }
  }

  TrainingData batch;
  batch.human = upsampled(data.human, config.upsample_human, config.seed, 0);
  batch.synthetic =
      upsampled(data.synthetic, config.upsample_synthetic, config.seed, 1);
  batch.pairwise =
      upsampled(data.pairwise, config.upsample_pairwise, config.seed, 2);

  // A zero coefficient removes the term from both the loss and the gradient,
  // keeping runs with and without that data bitwise identical.
  const bool use_synthetic = config.beta1 > 0.0 && !batch.synthetic.empty();
  const bool use_pairwise = config.beta2 > 0.0 && !batch.pairwise.empty();

  TrainResult result;
  result.params = make_head(dim, schema.n_bins);
  result.history.reserve(config.steps);

  ParamGrad grad;
  ParamGrad velocity;
  velocity.weights.assign(dim * schema.n_bins, 0.0);
  velocity.bias.assign(schema.n_bins, 0.0);

  for (std::size_t step = 0; step < config.steps; ++step) {
    grad.weights.assign(dim * schema.n_bins, 0.0);
    grad.bias.assign(schema.n_bins, 0.0);

    LossReport report;
    try {
      report.direct_human = direct_term(batch.human, result.params, schema, &grad);
      if (use_synthetic) {
        ParamGrad term_grad;
        term_grad.weights.assign(dim * schema.n_bins, 0.0);
        term_grad.bias.assign(schema.n_bins, 0.0);
        report.direct_synthetic =
            direct_term(batch.synthetic, result.params, schema, &term_grad);
        for (std::size_t k = 0; k < grad.weights.size(); ++k) {
          grad.weights[k] += config.beta1 * term_grad.weights[k];
        }
        for (std::size_t k = 0; k < grad.bias.size(); ++k) {
          grad.bias[k] += config.beta1 * term_grad.bias[k];
        }
      }
      if (use_pairwise) {
        ParamGrad term_grad;
        term_grad.weights.assign(dim * schema.n_bins, 0.0);
        term_grad.bias.assign(schema.n_bins, 0.0);
        report.rank =
            rank_term(batch.pairwise, result.params, schema, config, &term_grad);
        for (std::size_t k = 0; k < grad.weights.size(); ++k) {
          grad.weights[k] += config.beta2 * term_grad.weights[k];
        }
        for (std::size_t k = 0; k < grad.bias.size(); ++k) {
          grad.bias[k] += config.beta2 * term_grad.bias[k];
        }
      }
    } catch (const NumericError& e) {
      throw NumericError("training diverged at step " + std::to_string(step) + ": " +
                         e.what());
    }
    report.total = report.direct_human + config.beta1 * report.direct_synthetic +
                   config.beta2 * report.rank;
    if (!std::isfinite(report.total)) {
      throw NumericError("training diverged at step " + std::to_string(step) +
                         ": non-finite loss");
    }
    result.history.push_back(report);

    for (std::size_t k = 0; k < grad.weights.size(); ++k) {
      velocity.weights[k] =
          config.momentum * velocity.weights[k] - config.learning_rate * grad.weights[k];
      result.params.weights[k] += velocity.weights[k];
    }
    for (std::size_t k = 0; k < grad.bias.size(); ++k) {
      velocity.bias[k] =
          config.momentum * velocity.bias[k] - config.learning_rate * grad.bias[k];
      result.params.bias[k] += velocity.bias[k];
    }
  }
  return result;
}

}  // namespace odds
