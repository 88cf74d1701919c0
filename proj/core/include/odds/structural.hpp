#pragma once

// Scoring structured reasoning traces with a pluggable conditional
// probability scorer: exactly solved weighted truth assignment for maieutic
// graphs, and factor/condition aggregation for two-stage inference traces.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "odds/bin.hpp"
#include "odds/head.hpp"

namespace odds {

// Conditional probability estimate P(proposition | context) in [0,1].
// Implementations must be deterministic per (context, proposition) pair.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual double score(const std::string& context,
                       const std::string& proposition) const = 0;
};

// Fixed lookup table; unknown pairs are an error.
class TableScorer : public Scorer {
 public:
  void add(const std::string& context, const std::string& proposition, double value);
  double score(const std::string& context, const std::string& proposition) const override;

 private:
  std::map<std::pair<std::string, std::string>, double> table_;
};

// Expected decode of a trained head over hashed features.
class HeadScorer : public Scorer {
 public:
  HeadScorer(HeadParams head, BinSchema schema, std::uint64_t featurizer_seed);
  double score(const std::string& context, const std::string& proposition) const override;

 private:
  HeadParams head_;
  BinSchema schema_;
  std::uint64_t featurizer_seed_;
};

struct MaieuticNode {
  std::string id;
  std::string statement;
  std::string negation;
};

enum class EdgePolarity { supports, refutes };

struct MaieuticEdge {
  std::string parent, child;
  EdgePolarity polarity = EdgePolarity::supports;
};

struct MaieuticGraph {
  std::vector<MaieuticNode> nodes;
  std::vector<MaieuticEdge> edges;
  std::string root;
};

// Hard cap for the exact enumeration solve.
inline constexpr std::size_t kMaxMaieuticNodes = 24;

// Unique ids, resolvable endpoints and root, acyclic, node count within the
// exact-solve budget.
void validate_graph(const MaieuticGraph& graph);

struct MaieuticWeights {
  std::vector<double> belief_true;   // per node: scorer("", statement)
  std::vector<double> belief_false;  // per node: scorer("", negation)
  std::vector<double> consistency;   // per edge: child (or its negation for
                                     // refutes edges) scored given the parent
};

// Scorer failures are rethrown with the offending node or edge attached.
MaieuticWeights maieutic_weights(const MaieuticGraph& graph, const Scorer& scorer);

struct Assignment {
  std::vector<bool> values;  // parallel to graph.nodes
  double objective = 0.0;
};

struct MaieuticSolution {
  Assignment assignment;
  bool root_value = false;
};

// Exact argmax by enumeration of sum(log belief) + sum over edges of
// log(consistency) when the edge's implication holds under the assignment and
// log(1 - consistency) otherwise. Weights are clamped to [1e-6, 1 - 1e-6]
// before the logs. Ties prefer root = true, then the lexicographically
// smallest assignment over node order with false < true.
MaieuticSolution solve_maieutic(const MaieuticWeights& weights,
                                const MaieuticGraph& graph);

struct BirdFactor {
  std::string name;
  std::vector<std::string> conditions;  // at least one
};

struct BirdTrace {
  std::string context;
  std::string additional_sentence;  // optional; appended to the context
  std::vector<BirdFactor> factors;  // at least one
  std::vector<std::string> outcomes;  // at least two
};

void validate_trace(const BirdTrace& trace);

// Condition weights scored against the (extended) context and normalized
// within each factor; outcome scores averaged over factors and renormalized
// over outcomes.
std::vector<double> score_bird(const BirdTrace& trace, const Scorer& scorer);

struct MaieuticCase {
  MaieuticGraph graph;
  bool gold = false;
};

struct BirdCase {
  BirdTrace trace;
  std::size_t gold = 0;  // outcome index
};

using TraceCase = std::variant<MaieuticCase, BirdCase>;

// Root truth value (maieutic) or strict argmax outcome (two-stage traces,
// ties incorrect) against gold.
double trace_accuracy(const std::vector<TraceCase>& cases, const Scorer& scorer);

}  // namespace odds
