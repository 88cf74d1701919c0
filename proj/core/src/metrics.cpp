#include "odds/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "odds/errors.hpp"

namespace odds {
namespace {

// Ranks 1..n with tied values sharing their average rank.
std::vector<double> average_ranks(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw ValidationError("correlation undefined for constant input");
  }
  return sxy / std::sqrt(sxx * syy);
}

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError(std::string(what) + " must lie in [0,1]");
  }
}

// KL(p || m) with 0 log 0 = 0; m entrywise positive wherever p is.
double kl(const std::vector<double>& p, const std::vector<double>& m) {
  double out = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) out += p[i] * (std::log(p[i]) - std::log(m[i]));
  }
  return out;
}

}  // namespace

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw ValidationError("length mismatch in spearman");
  if (xs.size() < 2) throw ValidationError("spearman needs at least 2 points");
  return pearson(average_ranks(xs), average_ranks(ys));
}

double ranking_risk(const std::vector<double>& preds, const std::vector<double>& golds) {
  if (preds.size() != golds.size()) throw ValidationError("length mismatch in ranking risk");
  if (preds.size() < 2) throw ValidationError("ranking risk needs at least 2 points");
  std::size_t comparable = 0;
  std::size_t discordant = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    for (std::size_t j = i + 1; j < preds.size(); ++j) {
      if (golds[i] == golds[j]) continue;
      ++comparable;
      const bool gold_up = golds[i] < golds[j];
      if ((gold_up && preds[i] > preds[j]) || (!gold_up && preds[i] < preds[j])) {
        ++discordant;
      }
    }
  }
  if (comparable == 0) {
    throw ValidationError("ranking risk undefined: no pairs with distinct gold values");
  }
  return static_cast<double>(discordant) / static_cast<double>(comparable);
}

double top1_accuracy(const std::vector<RankedGroup>& groups) {
  if (groups.empty()) throw ValidationError("top1 accuracy over zero groups");
  double correct = 0.0;
  for (const RankedGroup& g : groups) {
    if (g.scores.size() < 2) {
      throw ValidationError("ranked group needs at least 2 candidates");
    }
    if (g.gold >= g.scores.size()) {
      throw ValidationError("gold index out of range in ranked group");
    }
    const auto it = std::max_element(g.scores.begin(), g.scores.end());
    const bool tied = std::count(g.scores.begin(), g.scores.end(), *it) > 1;
    const std::size_t argmax = static_cast<std::size_t>(it - g.scores.begin());
    if (!tied && argmax == g.gold) correct += 1.0;
  }
  return correct / static_cast<double>(groups.size());
}

double pairwise_direction_accuracy(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.empty()) throw ValidationError("direction accuracy over zero pairs");
  double correct = 0.0;
  for (const auto& [strengthened, weakened] : pairs) {
    if (strengthened > weakened) correct += 1.0;
  }
  return correct / static_cast<double>(pairs.size());
}

double ece(const std::vector<double>& preds, const std::vector<int>& labels,
           std::size_t n_bins) {
  if (preds.size() != labels.size()) throw ValidationError("length mismatch in ece");
  if (preds.empty()) throw ValidationError("ece over zero predictions");
  if (n_bins < 1) throw ValidationError("ece needs at least 1 bin");
  std::vector<double> sum_pred(n_bins, 0.0), sum_label(n_bins, 0.0);
  std::vector<std::size_t> count(n_bins, 0);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    check_probability(preds[i], "prediction");
    if (labels[i] != 0 && labels[i] != 1) {
      throw ValidationError("ece labels must be 0 or 1");
    }
    const std::size_t b = std::min(
        static_cast<std::size_t>(preds[i] * static_cast<double>(n_bins)), n_bins - 1);
    sum_pred[b] += preds[i];
    sum_label[b] += labels[i];
    ++count[b];
  }
  double out = 0.0;
  const double total = static_cast<double>(preds.size());
  for (std::size_t b = 0; b < n_bins; ++b) {
    if (count[b] == 0) continue;
    const double nb = static_cast<double>(count[b]);
    out += (nb / total) * std::abs(sum_pred[b] / nb - sum_label[b] / nb);
  }
  return out;
}

double brier(const std::vector<double>& preds, const std::vector<int>& labels) {
  if (preds.size() != labels.size()) throw ValidationError("length mismatch in brier");
  if (preds.empty()) throw ValidationError("brier over zero predictions");
  double out = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    check_probability(preds[i], "prediction");
    if (labels[i] != 0 && labels[i] != 1) {
      throw ValidationError("brier labels must be 0 or 1");
    }
    const double d = preds[i] - static_cast<double>(labels[i]);
    out += d * d;
  }
  return out / static_cast<double>(preds.size());
}

double jsd(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw ValidationError("jsd support mismatch");
  if (p.empty()) throw ValidationError("jsd over empty distributions");
  double sp = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] >= 0.0) || !(q[i] >= 0.0)) {
      throw ValidationError("jsd inputs must be non-negative");
    }
    sp += p[i];
    sq += q[i];
  }
  if (std::abs(sp - 1.0) > 1e-9 || std::abs(sq - 1.0) > 1e-9) {
    throw ValidationError("jsd inputs must sum to 1 within 1e-9");
  }
  std::vector<double> m(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) m[i] = 0.5 * (p[i] + q[i]);
  return 0.5 * kl(p, m) + 0.5 * kl(q, m);
}

double chaosnli_scalar(const VoteTriple& votes) {
  const double total = static_cast<double>(votes.entailment) +
                       static_cast<double>(votes.neutral) +
                       static_cast<double>(votes.contradiction);
  if (total <= 0.0) throw ValidationError("vote triple has zero total");
  return (1.0 * votes.entailment + 0.2 * votes.neutral + 0.0 * votes.contradiction) /
         total;
}

}  // namespace odds
