#pragma once

// Bin schema over [0,1], Gaussian target quantization, and coarse/fine
// decoding of bin distributions.

#include <cstddef>
#include <utility>
#include <vector>

namespace odds {

struct BinSchema {
  std::size_t n_bins = 0;
  std::vector<double> centers;          // strictly increasing, all in (0,1)
  std::vector<double> inner_midpoints;  // n_bins - 1 boundaries between centers
};

// Probability vector over the bins of one schema; the universal label and
// prediction representation.
struct BinDistribution {
  std::vector<double> probs;
};

struct QuantizeParams {
  double sigma = 0.05;  // Gaussian std deviation, in probability units
};

// sigma at or below this is treated as a point mass; see quantize_scalar.
inline constexpr double kPointMassSigma = 1e-6;

// Equal-width schema with centers (2j+1)/(2N) and midpoints j/N.
BinSchema make_schema(std::size_t n_bins);

// Length, non-negativity, and unit mass (1e-9) against the schema.
void validate_distribution(const BinDistribution& dist, const BinSchema& schema);

// Discretizes a Gaussian centered at y: each bin receives the Gaussian mass
// between the midpoints flanking its center, with tail mass beyond the
// outermost midpoints folded into the edge bins, so the result sums to 1
// exactly. For sigma <= kPointMassSigma the Gaussian is numerically a point
// mass: all mass goes to the bin whose midpoint interval contains y, and a y
// sitting exactly on a midpoint goes to the lower bin.
BinDistribution quantize_scalar(double y, const QuantizeParams& params,
                                const BinSchema& schema);

// Fine scalar prediction: expectation of bin centers under dist.
double expected_decode(const BinDistribution& dist, const BinSchema& schema);

// Coarse prediction: argmax bin, ties toward the lower index.
std::pair<std::size_t, double> greedy_decode(const BinDistribution& dist,
                                             const BinSchema& schema);

}  // namespace odds
