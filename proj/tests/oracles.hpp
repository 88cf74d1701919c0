#pragma once

// Test-only oracles, written independently of the library code they check.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace oracles {

// Standard normal CDF via erf (the library uses an erfc arrangement).
inline double normal_cdf(double z) {
  return 0.5 * (1.0 + std::erf(z / std::sqrt(2.0)));
}

inline double gaussian_cdf(double x, double mean, double sigma) {
  return normal_cdf((x - mean) / sigma);
}

// Quantization of N(y, sigma^2) onto centers (2j+1)/(2N): mass between the
// neighboring midpoints, tails folded into the edge bins.
inline std::vector<double> quantize(double y, double sigma, std::size_t n_bins) {
  std::vector<double> probs(n_bins);
  const double n = static_cast<double>(n_bins);
  double prev_cdf = 0.0;
  for (std::size_t j = 0; j < n_bins; ++j) {
    const double upper = j + 1 < n_bins ? gaussian_cdf((j + 1.0) / n, y, sigma) : 1.0;
    probs[j] = upper - prev_cdf;
    prev_cdf = upper;
  }
  return probs;
}

// Adaptive Simpson integration of the Gaussian density, for cross-checking
// the CDF oracle itself.
inline double gaussian_pdf(double x, double mean, double sigma) {
  const double z = (x - mean) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * 3.14159265358979323846));
}

inline double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson(double a, double b, double mean, double sigma,
                               double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double fa = gaussian_pdf(a, mean, sigma);
  const double fm = gaussian_pdf(m, mean, sigma);
  const double fb = gaussian_pdf(b, mean, sigma);
  const double whole = simpson(a, b, fa, fm, fb);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double left = simpson(a, m, fa, gaussian_pdf(lm, mean, sigma), fm);
  const double right = simpson(m, b, fm, gaussian_pdf(rm, mean, sigma), fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * eps) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson(a, m, mean, sigma, eps / 2.0, depth - 1) +
         adaptive_simpson(m, b, mean, sigma, eps / 2.0, depth - 1);
}

inline double gaussian_mass(double lo, double hi, double mean, double sigma) {
  return adaptive_simpson(lo, hi, mean, sigma, 1e-14, 40);
}

// Standard normal quantile by bisection on the CDF.
inline double normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("quantile input");
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (normal_cdf(mid) < u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Gaussian quantiles on a midpoint grid over (0,1); shared across the W2
// evaluations of one (y, sigma) pair.
inline std::vector<double> gaussian_quantiles(double y, double sigma,
                                              std::size_t grid) {
  std::vector<double> out(grid);
  for (std::size_t g = 0; g < grid; ++g) {
    const double u = (g + 0.5) / static_cast<double>(grid);
    out[g] = y + sigma * normal_quantile(u);
  }
  return out;
}

// Squared Wasserstein-2 distance between a discrete distribution on the bin
// centers and the Gaussian behind `quantiles`, by quantile-grid integration.
inline double w2_squared_to_gaussian(const std::vector<double>& probs,
                                     const std::vector<double>& centers,
                                     const std::vector<double>& quantiles) {
  std::vector<double> cum(probs.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < probs.size(); ++j) {
    acc += probs[j];
    cum[j] = acc;
  }
  double total = 0.0;
  std::size_t j = 0;
  const std::size_t grid = quantiles.size();
  for (std::size_t g = 0; g < grid; ++g) {
    const double u = (g + 0.5) / static_cast<double>(grid);
    while (j + 1 < probs.size() && cum[j] < u) ++j;
    const double d = centers[j] - quantiles[g];
    total += d * d;
  }
  return total / static_cast<double>(grid);
}

// Two-player win update at zero draw margin: v(t) = pdf(t)/cdf(t),
// w(t) = v(t) (v(t) + t).
struct SkillOracle {
  double mu_w, sigma_w, mu_l, sigma_l;
};

inline double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * 3.14159265358979323846);
}

inline SkillOracle trueskill_win_update(double mu_w, double sigma_w, double mu_l,
                                        double sigma_l, double beta) {
  const double c2 = sigma_w * sigma_w + sigma_l * sigma_l + 2.0 * beta * beta;
  const double c = std::sqrt(c2);
  const double t = (mu_w - mu_l) / c;
  const double v = normal_pdf(t) / normal_cdf(t);
  const double w = v * (v + t);
  SkillOracle out;
  out.mu_w = mu_w + sigma_w * sigma_w / c * v;
  out.mu_l = mu_l - sigma_l * sigma_l / c * v;
  out.sigma_w = std::sqrt(sigma_w * sigma_w * (1.0 - sigma_w * sigma_w / c2 * w));
  out.sigma_l = std::sqrt(sigma_l * sigma_l * (1.0 - sigma_l * sigma_l / c2 * w));
  return out;
}

}  // namespace oracles
