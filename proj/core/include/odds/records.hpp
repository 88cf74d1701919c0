#pragma once

// Record types for the JSONL file formats. One JSON object per line; field
// names and value conventions are documented in the README.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "odds/rating.hpp"
#include "odds/structural.hpp"

namespace odds {

enum class Source { human, synthetic, unlabeled };

struct Instance {
  std::string id;
  std::string context;
  std::string proposition;
  std::optional<double> target_scalar;             // in [0,1]
  std::optional<std::vector<double>> target_bins;  // explicit distribution
  Source source = Source::unlabeled;
};

enum class PairLabel { a_higher, b_higher };

struct PairwiseExample {
  std::string a, b;  // instance ids; must resolve when joined
  PairLabel label = PairLabel::a_higher;
};

inline int order_sign(PairLabel label) {
  return label == PairLabel::a_higher ? 1 : -1;
}

struct RolloutRecord {
  std::string instance_id;
  std::string model_name;
  double estimate = 0.0;               // in [0,1]
  std::optional<double> confidence;    // in [0,1]
  std::optional<std::string> rationale;
};

struct FeatureRecord {
  std::string id;
  std::vector<double> values;
};

struct PredictionRecord {
  std::string id;
  std::size_t bin = 0;   // greedy bin index
  double coarse = 0.0;   // greedy bin center
  double fine = 0.0;     // expected decode
  std::vector<double> probs;
};

struct RatingRecord {
  std::string id;
  double mu = 0.0;
  double sigma = 0.0;
  double mapped_score = 0.0;
};

struct ComparisonTableRecord {
  std::string a, b;
  Outcome outcome = Outcome::draw;
};

struct FusedTargetRecord {
  std::string instance_id;
  double discrepancy = 0.0;
  bool low_discrepancy = false;
  std::vector<double> weights;
  std::vector<double> target;
};

struct MaieuticGraphRecord {
  std::string id;
  MaieuticGraph graph;
  std::optional<bool> gold;
};

struct BirdTraceRecord {
  std::string id;
  BirdTrace trace;
  std::optional<std::size_t> gold;
};

struct ScorerTableRecord {
  std::string context;
  std::string proposition;
  double score = 0.0;
};

}  // namespace odds
