#include "odds/bin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "odds/errors.hpp"

namespace odds {
namespace {

// CDF of N(mean, sigma^2); erfc keeps full relative accuracy in the tails.
double gaussian_cdf(double x, double mean, double sigma) {
  return 0.5 * std::erfc(-(x - mean) / (sigma * std::sqrt(2.0)));
}

}  // namespace

BinSchema make_schema(std::size_t n_bins) {
  if (n_bins < 2) {
    throw ValidationError("bin schema needs at least 2 bins, got " +
                          std::to_string(n_bins));
  }
  BinSchema schema;
  schema.n_bins = n_bins;
  schema.centers.resize(n_bins);
  schema.inner_midpoints.resize(n_bins - 1);
  const double n = static_cast<double>(n_bins);
  for (std::size_t j = 0; j < n_bins; ++j) {
    schema.centers[j] = (2.0 * static_cast<double>(j) + 1.0) / (2.0 * n);
  }
  for (std::size_t j = 0; j + 1 < n_bins; ++j) {
    schema.inner_midpoints[j] = 0.5 * (schema.centers[j] + schema.centers[j + 1]);
  }
  return schema;
}

void validate_distribution(const BinDistribution& dist, const BinSchema& schema) {
  if (dist.probs.size() != schema.n_bins) {
    throw ValidationError("distribution has " + std::to_string(dist.probs.size()) +
                          " entries for a schema with " +
                          std::to_string(schema.n_bins) + " bins");
  }
  double sum = 0.0;
  for (double p : dist.probs) {
    if (!(p >= 0.0)) {
      throw ValidationError("distribution entries must be non-negative");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ValidationError("distribution mass is " + std::to_string(sum) +
                          ", expected 1 within 1e-9");
  }
}

BinDistribution quantize_scalar(double y, const QuantizeParams& params,
                                const BinSchema& schema) {
  if (!(params.sigma > 0.0)) {
    throw ValidationError("quantization sigma must be positive");
  }
  if (!(y >= 0.0 && y <= 1.0)) {
    throw ValidationError("quantization target must lie in [0,1], got " +
                          std::to_string(y));
  }
  const auto& mids = schema.inner_midpoints;
  BinDistribution out;
  out.probs.assign(schema.n_bins, 0.0);

  if (params.sigma <= kPointMassSigma) {
    // Point mass: right-continuous step CDF, so a midpoint belongs to the
    // lower of the two bins it separates.
    const std::size_t idx = static_cast<std::size_t>(
        std::lower_bound(mids.begin(), mids.end(), y) - mids.begin());
    out.probs[idx] = 1.0;
    return out;
  }

  // Telescoping differences: the edge bins absorb the tails and the total is
  // exactly 1.
  double prev = 0.0;
  for (std::size_t j = 0; j + 1 < schema.n_bins; ++j) {
    const double cur = gaussian_cdf(mids[j], y, params.sigma);
    out.probs[j] = std::max(0.0, cur - prev);
    prev = cur;
  }
  out.probs[schema.n_bins - 1] = std::max(0.0, 1.0 - prev);
  return out;
}

double expected_decode(const BinDistribution& dist, const BinSchema& schema) {
  validate_distribution(dist, schema);
  return std::inner_product(dist.probs.begin(), dist.probs.end(),
                            schema.centers.begin(), 0.0);
}

std::pair<std::size_t, double> greedy_decode(const BinDistribution& dist,
                                             const BinSchema& schema) {
  validate_distribution(dist, schema);
  const auto it = std::max_element(dist.probs.begin(), dist.probs.end());
  const std::size_t idx = static_cast<std::size_t>(it - dist.probs.begin());
  return {idx, schema.centers[idx]};
}

}  // namespace odds
