#include "odds/head.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>
#include <string_view>

#include "odds/errors.hpp"

namespace odds {
namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv1a(std::uint64_t h, std::string_view bytes) {
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= kFnvPrime;
  }
  return h;
}

std::uint64_t fnv1a_u64(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffULL;
    h *= kFnvPrime;
  }
  return h;
}

// Lowercased alphanumeric runs of `text`, each hashed under `field_tag` into
// one of d buckets.
void hash_tokens(std::string_view text, char field_tag, std::uint64_t seed,
                 std::size_t d, std::vector<double>& counts) {
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    std::uint64_t h = fnv1a_u64(kFnvOffset, seed);
    h = fnv1a(h, std::string_view(&field_tag, 1));
    h = fnv1a(h, token);
    counts[h % d] += 1.0;
    token.clear();
  };
  for (const char raw : text) {
    const unsigned char c = static_cast<unsigned char>(raw);
    if (std::isalnum(c)) {
      token.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
    }
  }
  flush();
}

}  // namespace

HeadParams make_head(std::size_t dim, std::size_t n_bins) {
  if (dim == 0 || n_bins == 0) {
    throw ValidationError("head dimensions must be positive");
  }
  HeadParams head;
  head.dim = dim;
  head.n_bins = n_bins;
  head.weights.assign(dim * n_bins, 0.0);
  head.bias.assign(n_bins, 0.0);
  return head;
}

void validate_head(const HeadParams& head) {
  if (head.weights.size() != head.dim * head.n_bins ||
      head.bias.size() != head.n_bins) {
    throw ValidationError("head parameter shapes do not match dim x n_bins");
  }
  for (double w : head.weights) {
    if (!std::isfinite(w)) throw NumericError("head weights contain non-finite values");
  }
  for (double b : head.bias) {
    if (!std::isfinite(b)) throw NumericError("head bias contains non-finite values");
  }
}

std::vector<double> head_logits(const HeadParams& head, const FeatureVector& x) {
  if (x.values.size() != head.dim) {
    throw ValidationError("feature vector has dimension " +
                          std::to_string(x.values.size()) + ", head expects " +
                          std::to_string(head.dim));
  }
  std::vector<double> logits(head.bias);
  for (std::size_t i = 0; i < head.dim; ++i) {
    const double xi = x.values[i];
    if (xi == 0.0) continue;
    const double* row = head.weights.data() + i * head.n_bins;
    for (std::size_t j = 0; j < head.n_bins; ++j) {
      logits[j] += xi * row[j];
    }
  }
  return logits;
}

BinDistribution softmax(const std::vector<double>& logits) {
  if (logits.empty()) throw ValidationError("softmax over zero bins");
  double max_logit = logits[0];
  for (double z : logits) {
    if (!std::isfinite(z)) throw NumericError("softmax input contains non-finite logits");
    max_logit = std::max(max_logit, z);
  }
  BinDistribution out;
  out.probs.resize(logits.size());
  double sum = 0.0;
  for (std::size_t j = 0; j < logits.size(); ++j) {
    // Floor the shifted logit so even extreme gaps keep strictly positive mass.
    const double z = std::max(logits[j] - max_logit, -700.0);
    out.probs[j] = std::exp(z);
    sum += out.probs[j];
  }
  for (double& p : out.probs) p /= sum;
  return out;
}

BinDistribution forward(const HeadParams& head, const FeatureVector& x) {
  return softmax(head_logits(head, x));
}

FeatureVector hashed_featurizer(const std::string& context,
                                const std::string& proposition, std::size_t d,
                                std::uint64_t seed) {
  if (d < 8) {
    throw ValidationError("featurizer needs d >= 8, got " + std::to_string(d));
  }
  FeatureVector out;
  out.values.assign(d, 0.0);
  hash_tokens(context, 'c', seed, d, out.values);
  hash_tokens(proposition, 'p', seed, d, out.values);
  double norm_sq = 0.0;
  for (double v : out.values) norm_sq += v * v;
  if (norm_sq == 0.0) {
    throw ValidationError("featurizer got no tokens from context or proposition");
  }
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (double& v : out.values) v *= inv;
  return out;
}

}  // namespace odds
