#pragma once

// Evaluation statistics: rank correlation, ranking risk, comparison
// accuracies, calibration metrics, and the three-way vote mapping.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace odds {

// Three-way annotator vote counts; sum must be positive.
struct VoteTriple {
  unsigned entailment = 0;
  unsigned neutral = 0;
  unsigned contradiction = 0;
};

// Rank correlation with average ranks for ties. Constant input is an error.
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

// Fraction of discordant pairs among pairs with distinct gold values;
// prediction ties are excluded from the numerator, gold ties from the
// denominator.
double ranking_risk(const std::vector<double>& preds, const std::vector<double>& golds);

struct RankedGroup {
  std::vector<double> scores;  // one per candidate, >= 2 candidates
  std::size_t gold = 0;        // index of the correct candidate
};

// Mean of [argmax == gold]; a tie at the top counts as incorrect.
double top1_accuracy(const std::vector<RankedGroup>& groups);

// Fraction of (strengthened, weakened) score pairs in the right strict order.
double pairwise_direction_accuracy(const std::vector<std::pair<double, double>>& pairs);

// Expected calibration error over equal-width confidence bins.
double ece(const std::vector<double>& preds, const std::vector<int>& labels,
           std::size_t n_bins);

// Mean squared error between predictions and binary labels.
double brier(const std::vector<double>& preds, const std::vector<int>& labels);

// Jensen-Shannon divergence, natural log, in [0, ln 2].
double jsd(const std::vector<double>& p, const std::vector<double>& q);

// Scalar score for a vote triple: full weight to entailment votes, 0.2 to
// neutral, none to contradiction.
double chaosnli_scalar(const VoteTriple& votes);

struct MetricEntry {
  std::string name;
  double value = 0.0;
  std::size_t count = 0;  // samples the metric was computed over
};

struct MetricsReport {
  std::vector<MetricEntry> entries;
};

}  // namespace odds
