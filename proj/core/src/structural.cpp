#include "odds/structural.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "odds/errors.hpp"

namespace odds {
namespace {

constexpr double kWeightEps = 1e-6;

double clamp_weight(double w) {
  return std::clamp(w, kWeightEps, 1.0 - kWeightEps);
}

double checked_score(const Scorer& scorer, const std::string& context,
                     const std::string& proposition, const std::string& where) {
  double s;
  try {
    s = scorer.score(context, proposition);
  } catch (const std::exception& e) {
    throw ValidationError(where + ": " + e.what());
  }
  if (!(s >= 0.0 && s <= 1.0)) {
    throw NumericError(where + ": scorer returned " + std::to_string(s) +
                       ", outside [0,1]");
  }
  return s;
}

std::unordered_map<std::string, std::size_t> node_index(const MaieuticGraph& graph) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    if (!index.emplace(graph.nodes[i].id, i).second) {
      throw ValidationError("duplicate node id '" + graph.nodes[i].id + "'");
    }
  }
  return index;
}

}  // namespace

void TableScorer::add(const std::string& context, const std::string& proposition,
                      double value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ValidationError("table score must lie in [0,1]");
  }
  table_[{context, proposition}] = value;
}

double TableScorer::score(const std::string& context,
                          const std::string& proposition) const {
  const auto it = table_.find({context, proposition});
  if (it == table_.end()) {
    throw ValidationError("no table entry for ('" + context + "', '" + proposition +
                          "')");
  }
  return it->second;
}

HeadScorer::HeadScorer(HeadParams head, BinSchema schema, std::uint64_t featurizer_seed)
    : head_(std::move(head)), schema_(std::move(schema)), featurizer_seed_(featurizer_seed) {
  validate_head(head_);
  if (head_.n_bins != schema_.n_bins) {
    throw ValidationError("head and schema disagree on bin count");
  }
}

double HeadScorer::score(const std::string& context,
                         const std::string& proposition) const {
  const FeatureVector x =
      hashed_featurizer(context, proposition, head_.dim, featurizer_seed_);
  return expected_decode(forward(head_, x), schema_);
}

void validate_graph(const MaieuticGraph& graph) {
  if (graph.nodes.empty()) throw ValidationError("graph has no nodes");
  if (graph.nodes.size() > kMaxMaieuticNodes) {
    throw ValidationError("graph has " + std::to_string(graph.nodes.size()) +
                          " nodes; exact solving is capped at " +
                          std::to_string(kMaxMaieuticNodes) +
                          " (an approximate solver is out of scope)");
  }
  const auto index = node_index(graph);
  if (index.find(graph.root) == index.end()) {
    throw ValidationError("root id '" + graph.root + "' is not a node");
  }
  std::vector<std::vector<std::size_t>> children(graph.nodes.size());
  std::vector<std::size_t> indegree(graph.nodes.size(), 0);
  for (const MaieuticEdge& edge : graph.edges) {
    const auto p = index.find(edge.parent);
    const auto c = index.find(edge.child);
    if (p == index.end() || c == index.end()) {
      throw ValidationError("edge endpoint '" +
                            (p == index.end() ? edge.parent : edge.child) +
                            "' is not a node");
    }
    children[p->second].push_back(c->second);
    ++indegree[c->second];
  }
  // Kahn's algorithm; leftovers mean a cycle.
  std::vector<std::size_t> queue;
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    if (indegree[i] == 0) queue.push_back(i);
  }
  std::size_t visited = 0;
  while (!queue.empty()) {
    const std::size_t u = queue.back();
    queue.pop_back();
    ++visited;
    for (std::size_t v : children[u]) {
      if (--indegree[v] == 0) queue.push_back(v);
    }
  }
  if (visited != graph.nodes.size()) {
    throw ValidationError("graph contains a cycle");
  }
}

MaieuticWeights maieutic_weights(const MaieuticGraph& graph, const Scorer& scorer) {
  validate_graph(graph);
  MaieuticWeights out;
  out.belief_true.reserve(graph.nodes.size());
  out.belief_false.reserve(graph.nodes.size());
  out.consistency.reserve(graph.edges.size());
  for (const MaieuticNode& node : graph.nodes) {
    out.belief_true.push_back(
        checked_score(scorer, "", node.statement, "node '" + node.id + "'"));
    out.belief_false.push_back(
        checked_score(scorer, "", node.negation, "node '" + node.id + "'"));
  }
  const auto index = node_index(graph);
  for (const MaieuticEdge& edge : graph.edges) {
    const MaieuticNode& parent = graph.nodes[index.at(edge.parent)];
    const MaieuticNode& child = graph.nodes[index.at(edge.child)];
    const std::string& target =
        edge.polarity == EdgePolarity::supports ? child.statement : child.negation;
    out.consistency.push_back(
        checked_score(scorer, parent.statement, target,
                      "edge '" + edge.parent + "' -> '" + edge.child + "'"));
  }
  return out;
}

MaieuticSolution solve_maieutic(const MaieuticWeights& weights,
                                const MaieuticGraph& graph) {
  validate_graph(graph);
  const std::size_t n = graph.nodes.size();
  if (weights.belief_true.size() != n || weights.belief_false.size() != n ||
      weights.consistency.size() != graph.edges.size()) {
    throw ValidationError("weights do not match the graph shape");
  }
  const auto index = node_index(graph);
  const std::size_t root = index.at(graph.root);

  struct EdgeRef {
    std::size_t parent, child;
    bool child_target;  // child value that satisfies the implication
    double log_sat, log_unsat;
  };
  std::vector<EdgeRef> edges(graph.edges.size());
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    const double c = clamp_weight(weights.consistency[e]);
    edges[e] = {index.at(graph.edges[e].parent), index.at(graph.edges[e].child),
                graph.edges[e].polarity == EdgePolarity::supports, std::log(c),
                std::log(1.0 - c)};
  }
  std::vector<double> log_true(n), log_false(n);
  for (std::size_t i = 0; i < n; ++i) {
    log_true[i] = std::log(clamp_weight(weights.belief_true[i]));
    log_false[i] = std::log(clamp_weight(weights.belief_false[i]));
  }

  // A lexicographically smaller assignment over node order with false < true.
  const auto lex_less = [n](std::uint32_t a, std::uint32_t b) {
    for (std::size_t i = 0; i < n; ++i) {
      const bool va = (a >> i) & 1u;
      const bool vb = (b >> i) & 1u;
      if (va != vb) return !va;
    }
    return false;
  };

  bool have_best = false;
  double best_obj = 0.0;
  std::uint32_t best_mask = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      obj += ((mask >> i) & 1u) ? log_true[i] : log_false[i];
    }
    for (const EdgeRef& e : edges) {
      const bool parent_val = (mask >> e.parent) & 1u;
      const bool child_val = (mask >> e.child) & 1u;
      // Implication: a true parent demands the child's target value.
      const bool satisfied = !parent_val || child_val == e.child_target;
      obj += satisfied ? e.log_sat : e.log_unsat;
    }
    bool better = !have_best || obj > best_obj;
    if (have_best && obj == best_obj) {
      const bool root_now = (mask >> root) & 1u;
      const bool root_best = (best_mask >> root) & 1u;
      if (root_now != root_best) {
        better = root_now;
      } else {
        better = lex_less(mask, best_mask);
      }
    }
    if (better) {
      have_best = true;
      best_obj = obj;
      best_mask = mask;
    }
  }

  MaieuticSolution solution;
  solution.assignment.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    solution.assignment.values[i] = (best_mask >> i) & 1u;
  }
  solution.assignment.objective = best_obj;
  solution.root_value = solution.assignment.values[root];
  return solution;
}

void validate_trace(const BirdTrace& trace) {
  if (trace.factors.empty()) throw ValidationError("trace has no factors");
  for (const BirdFactor& factor : trace.factors) {
    if (factor.conditions.empty()) {
      throw ValidationError("factor '" + factor.name + "' has no conditions");
    }
  }
  if (trace.outcomes.size() < 2) {
    throw ValidationError("trace needs at least 2 outcomes");
  }
}

std::vector<double> score_bird(const BirdTrace& trace, const Scorer& scorer) {
  validate_trace(trace);
  const std::string context = trace.additional_sentence.empty()
                                  ? trace.context
                                  : trace.context + " " + trace.additional_sentence;
  std::vector<double> raw(trace.outcomes.size(), 0.0);
  for (const BirdFactor& factor : trace.factors) {
    std::vector<double> weights(factor.conditions.size());
    double sum = 0.0;
    for (std::size_t c = 0; c < factor.conditions.size(); ++c) {
      weights[c] = checked_score(scorer, context, factor.conditions[c],
                                 "factor '" + factor.name + "'");
      sum += weights[c];
    }
    if (sum <= 0.0) {
      throw ValidationError("factor '" + factor.name +
                            "' has all-zero condition scores");
    }
    for (double& w : weights) w /= sum;
    for (std::size_t o = 0; o < trace.outcomes.size(); ++o) {
      double score = 0.0;
      for (std::size_t c = 0; c < factor.conditions.size(); ++c) {
        score += weights[c] * checked_score(scorer, factor.conditions[c],
                                            trace.outcomes[o],
                                            "factor '" + factor.name + "'");
      }
      raw[o] += score / static_cast<double>(trace.factors.size());
    }
  }
  double total = 0.0;
  for (double r : raw) total += r;
  if (total <= 0.0) {
    throw ValidationError("degenerate trace: every outcome scored zero");
  }
  for (double& r : raw) r /= total;
  return raw;
}

double trace_accuracy(const std::vector<TraceCase>& cases, const Scorer& scorer) {
  if (cases.empty()) throw ValidationError("trace accuracy over zero cases");
  double correct = 0.0;
  for (const TraceCase& c : cases) {
    if (const auto* m = std::get_if<MaieuticCase>(&c)) {
      const MaieuticSolution sol = solve_maieutic(maieutic_weights(m->graph, scorer), m->graph);
      if (sol.root_value == m->gold) correct += 1.0;
    } else {
      const auto& b = std::get<BirdCase>(c);
      if (b.gold >= b.trace.outcomes.size()) {
        throw ValidationError("gold outcome index out of range");
      }
      const std::vector<double> dist = score_bird(b.trace, scorer);
      const auto it = std::max_element(dist.begin(), dist.end());
      const bool tied = std::count(dist.begin(), dist.end(), *it) > 1;
      const std::size_t argmax = static_cast<std::size_t>(it - dist.begin());
      if (!tied && argmax == b.gold) correct += 1.0;
    }
  }
  return correct / static_cast<double>(cases.size());
}

}  // namespace odds
