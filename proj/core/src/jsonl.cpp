#include "odds/jsonl.hpp"

#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "odds/errors.hpp"

namespace odds {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, std::size_t line, const std::string& msg) {
  throw ValidationError(path + ":" + std::to_string(line) + ": " + msg);
}

// Strict field access over one record: every key must be consumed.
class FieldReader {
 public:
  FieldReader(const json& obj, const std::string& path, std::size_t line)
      : obj_(obj), path_(path), line_(line) {
    if (!obj.is_object()) fail(path_, line_, "expected a JSON object");
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() || it->is_null() ? nullptr : &*it;
  }

  const json& require(const std::string& key) {
    const json* v = find(key);
    if (v == nullptr) fail(path_, line_, "missing field '" + key + "'");
    return *v;
  }

  std::string require_string(const std::string& key) {
    const json& v = require(key);
    if (!v.is_string()) fail(path_, line_, "field '" + key + "' must be a string");
    return v.get<std::string>();
  }

  double require_number(const std::string& key) {
    const json& v = require(key);
    if (!v.is_number()) fail(path_, line_, "field '" + key + "' must be a number");
    return v.get<double>();
  }

  std::size_t require_count(const std::string& key) {
    const json& v = require(key);
    if (!v.is_number_unsigned()) {
      fail(path_, line_, "field '" + key + "' must be a non-negative integer");
    }
    return v.get<std::size_t>();
  }

  double require_probability(const std::string& key) {
    const double x = require_number(key);
    if (!(x >= 0.0 && x <= 1.0)) {
      fail(path_, line_, "field '" + key + "' must lie in [0,1]");
    }
    return x;
  }

  std::vector<double> require_number_array(const std::string& key) {
    const json& v = require(key);
    if (!v.is_array()) fail(path_, line_, "field '" + key + "' must be an array");
    std::vector<double> out;
    out.reserve(v.size());
    for (const json& e : v) {
      if (!e.is_number()) fail(path_, line_, "field '" + key + "' must hold numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      (void)value;
      if (seen_.find(key) == seen_.end()) {
        fail(path_, line_, "unknown field '" + key + "'");
      }
    }
  }

  const std::string& path() const { return path_; }
  std::size_t line() const { return line_; }

 private:
  const json& obj_;
  std::string path_;
  std::size_t line_;
  std::set<std::string> seen_;
};

bool is_header(const json& obj) {
  return obj.is_object() && obj.contains("type") && obj["type"].is_string() &&
         obj["type"].get<std::string>() == "header";
}

template <typename T>
std::vector<T> load_lines(const std::string& path,
                          const std::function<T(FieldReader&)>& parse) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::vector<T> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      fail(path, line_no, std::string("parse error: ") + e.what());
    }
    if (is_header(obj)) continue;
    FieldReader reader(obj, path, line_no);
    out.push_back(parse(reader));
    reader.finish();
  }
  return out;
}

class Writer {
 public:
  Writer(const std::string& path, const std::string& header) : out_(path, std::ios::binary) {
    if (!out_) throw ValidationError("cannot open '" + path + "' for writing");
    if (!header.empty()) {
      json h = json::parse(header);
      h["type"] = "header";
      out_ << h.dump() << '\n';
    }
  }

  void line(const json& obj) { out_ << obj.dump() << '\n'; }

 private:
  std::ofstream out_;
};

Outcome parse_outcome(FieldReader& r, const std::string& key) {
  const std::string s = r.require_string(key);
  if (s == "a_wins") return Outcome::a_wins;
  if (s == "b_wins") return Outcome::b_wins;
  if (s == "draw") return Outcome::draw;
  fail(r.path(), r.line(), "field '" + key + "' must be a_wins, b_wins, or draw");
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::a_wins: return "a_wins";
    case Outcome::b_wins: return "b_wins";
    default: return "draw";
  }
}

void check_unique(std::unordered_set<std::string>& seen, const std::string& id,
                  const std::string& path, std::size_t line) {
  if (!seen.insert(id).second) fail(path, line, "duplicate id '" + id + "'");
}

void check_target_bins(const std::vector<double>& bins, const std::string& path,
                       std::size_t line) {
  if (bins.size() < 2) fail(path, line, "distribution target needs at least 2 bins");
  double sum = 0.0;
  for (double p : bins) {
    if (!(p >= 0.0 && p <= 1.0)) fail(path, line, "distribution entries must lie in [0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    fail(path, line, "distribution target must sum to 1 within 1e-9");
  }
}

}  // namespace

std::vector<Instance> load_instances(const std::string& path) {
  std::unordered_set<std::string> seen;
  return load_lines<Instance>(path, [&](FieldReader& r) {
    Instance rec;
    rec.id = r.require_string("id");
    check_unique(seen, rec.id, r.path(), r.line());
    rec.context = r.require_string("context");
    rec.proposition = r.require_string("proposition");
    if (const json* t = r.find("target")) {
      if (t->is_number()) {
        const double y = t->get<double>();
        if (!(y >= 0.0 && y <= 1.0)) {
          fail(r.path(), r.line(), "scalar target must lie in [0,1]");
        }
        rec.target_scalar = y;
      } else if (t->is_array()) {
        std::vector<double> bins;
        for (const json& e : *t) {
          if (!e.is_number()) fail(r.path(), r.line(), "target array must hold numbers");
          bins.push_back(e.get<double>());
        }
        check_target_bins(bins, r.path(), r.line());
        rec.target_bins = std::move(bins);
      } else {
        fail(r.path(), r.line(), "target must be a number or an array");
      }
    }
    if (const json* s = r.find("source")) {
      const std::string name = s->is_string() ? s->get<std::string>() : "";
      if (name == "human") {
        rec.source = Source::human;
      } else if (name == "synthetic") {
        rec.source = Source::synthetic;
      } else if (name == "unlabeled") {
        rec.source = Source::unlabeled;
      } else {
        fail(r.path(), r.line(), "source must be human, synthetic, or unlabeled");
      }
    }
    return rec;
  });
}

std::vector<PairwiseExample> load_pairwise(const std::string& path) {
  return load_lines<PairwiseExample>(path, [&](FieldReader& r) {
    PairwiseExample rec;
    rec.a = r.require_string("a");
    rec.b = r.require_string("b");
    const std::string label = r.require_string("label");
    if (label == "a_higher") {
      rec.label = PairLabel::a_higher;
    } else if (label == "b_higher") {
      rec.label = PairLabel::b_higher;
    } else {
      fail(r.path(), r.line(), "label must be a_higher or b_higher");
    }
    if (rec.a == rec.b) fail(r.path(), r.line(), "pair references the same instance twice");
    return rec;
  });
}

std::vector<RolloutRecord> load_rollouts(const std::string& path) {
  return load_lines<RolloutRecord>(path, [&](FieldReader& r) {
    RolloutRecord rec;
    rec.instance_id = r.require_string("instance_id");
    rec.model_name = r.require_string("model");
    rec.estimate = r.require_probability("estimate");
    if (const json* c = r.find("confidence")) {
      if (!c->is_number()) fail(r.path(), r.line(), "confidence must be a number");
      const double v = c->get<double>();
      if (!(v >= 0.0 && v <= 1.0)) fail(r.path(), r.line(), "confidence must lie in [0,1]");
      rec.confidence = v;
    }
    if (const json* t = r.find("rationale")) {
      if (!t->is_string()) fail(r.path(), r.line(), "rationale must be a string");
      rec.rationale = t->get<std::string>();
    }
    return rec;
  });
}

std::vector<FeatureRecord> load_features(const std::string& path) {
  std::unordered_set<std::string> seen;
  return load_lines<FeatureRecord>(path, [&](FieldReader& r) {
    FeatureRecord rec;
    rec.id = r.require_string("id");
    check_unique(seen, rec.id, r.path(), r.line());
    rec.values = r.require_number_array("values");
    if (rec.values.empty()) fail(r.path(), r.line(), "feature vector is empty");
    for (double v : rec.values) {
      if (!std::isfinite(v)) fail(r.path(), r.line(), "feature values must be finite");
    }
    return rec;
  });
}

std::vector<PredictionRecord> load_predictions(const std::string& path) {
  std::unordered_set<std::string> seen;
  return load_lines<PredictionRecord>(path, [&](FieldReader& r) {
    PredictionRecord rec;
    rec.id = r.require_string("id");
    check_unique(seen, rec.id, r.path(), r.line());
    rec.bin = r.require_count("bin");
    rec.coarse = r.require_probability("coarse");
    rec.fine = r.require_probability("fine");
    rec.probs = r.require_number_array("probs");
    check_target_bins(rec.probs, r.path(), r.line());
    if (rec.bin >= rec.probs.size()) fail(r.path(), r.line(), "bin index out of range");
    return rec;
  });
}

std::vector<RatingRecord> load_ratings(const std::string& path) {
  std::unordered_set<std::string> seen;
  return load_lines<RatingRecord>(path, [&](FieldReader& r) {
    RatingRecord rec;
    rec.id = r.require_string("id");
    check_unique(seen, rec.id, r.path(), r.line());
    rec.mu = r.require_number("mu");
    rec.sigma = r.require_number("sigma");
    if (!(rec.sigma > 0.0)) fail(r.path(), r.line(), "sigma must be positive");
    rec.mapped_score = r.require_number("mapped_score");
    return rec;
  });
}

std::vector<ComparisonRecord> load_comparison_log(const std::string& path) {
  return load_lines<ComparisonRecord>(path, [&](FieldReader& r) {
    ComparisonRecord rec;
    rec.a_id = r.require_string("a_id");
    rec.b_id = r.require_string("b_id");
    rec.outcome = parse_outcome(r, "outcome");
    rec.step = r.require_count("step");
    return rec;
  });
}

std::vector<ComparisonTableRecord> load_comparison_table(const std::string& path) {
  std::unordered_set<std::string> seen;
  return load_lines<ComparisonTableRecord>(path, [&](FieldReader& r) {
    ComparisonTableRecord rec;
    rec.a = r.require_string("a");
    rec.b = r.require_string("b");
    rec.outcome = parse_outcome(r, "outcome");
    if (rec.a == rec.b) fail(r.path(), r.line(), "comparison of an item with itself");
    check_unique(seen, rec.a + "\x1f" + rec.b, r.path(), r.line());
    return rec;
  });
}

std::vector<FusedTargetRecord> load_fused_targets(const std::string& path) {
  std::unordered_set<std::string> seen;
  return load_lines<FusedTargetRecord>(path, [&](FieldReader& r) {
    FusedTargetRecord rec;
    rec.instance_id = r.require_string("instance_id");
    check_unique(seen, rec.instance_id, r.path(), r.line());
    rec.discrepancy = r.require_probability("discrepancy");
    const json& low = r.require("low_discrepancy");
    if (!low.is_boolean()) fail(r.path(), r.line(), "low_discrepancy must be a boolean");
    rec.low_discrepancy = low.get<bool>();
    rec.weights = r.require_number_array("weights");
    rec.target = r.require_number_array("target");
    check_target_bins(rec.target, r.path(), r.line());
    return rec;
  });
}

std::vector<MaieuticGraphRecord> load_maieutic_graphs(const std::string& path) {
  std::unordered_set<std::string> seen;
  return load_lines<MaieuticGraphRecord>(path, [&](FieldReader& r) {
    MaieuticGraphRecord rec;
    rec.id = r.require_string("id");
    check_unique(seen, rec.id, r.path(), r.line());
    rec.graph.root = r.require_string("root");
    const json& nodes = r.require("nodes");
    if (!nodes.is_array()) fail(r.path(), r.line(), "nodes must be an array");
    for (const json& n : nodes) {
      FieldReader nr(n, r.path(), r.line());
      MaieuticNode node;
      node.id = nr.require_string("id");
      node.statement = nr.require_string("statement");
      node.negation = nr.require_string("negation");
      nr.finish();
      rec.graph.nodes.push_back(std::move(node));
    }
    const json& edges = r.require("edges");
    if (!edges.is_array()) fail(r.path(), r.line(), "edges must be an array");
    for (const json& e : edges) {
      FieldReader er(e, r.path(), r.line());
      MaieuticEdge edge;
      edge.parent = er.require_string("parent");
      edge.child = er.require_string("child");
      const std::string polarity = er.require_string("polarity");
      if (polarity == "supports") {
        edge.polarity = EdgePolarity::supports;
      } else if (polarity == "refutes") {
        edge.polarity = EdgePolarity::refutes;
      } else {
        fail(r.path(), r.line(), "polarity must be supports or refutes");
      }
      er.finish();
      rec.graph.edges.push_back(std::move(edge));
    }
    if (const json* g = r.find("gold")) {
      if (!g->is_boolean()) fail(r.path(), r.line(), "gold must be a boolean");
      rec.gold = g->get<bool>();
    }
    try {
      validate_graph(rec.graph);
    } catch (const ValidationError& e) {
      fail(r.path(), r.line(), e.what());
    }
    return rec;
  });
}

std::vector<BirdTraceRecord> load_bird_traces(const std::string& path) {
  std::unordered_set<std::string> seen;
  return load_lines<BirdTraceRecord>(path, [&](FieldReader& r) {
    BirdTraceRecord rec;
    rec.id = r.require_string("id");
    check_unique(seen, rec.id, r.path(), r.line());
    rec.trace.context = r.require_string("context");
    if (const json* s = r.find("additional_sentence")) {
      if (!s->is_string()) fail(r.path(), r.line(), "additional_sentence must be a string");
      rec.trace.additional_sentence = s->get<std::string>();
    }
    const json& factors = r.require("factors");
    if (!factors.is_array()) fail(r.path(), r.line(), "factors must be an array");
    for (const json& f : factors) {
      FieldReader fr(f, r.path(), r.line());
      BirdFactor factor;
      factor.name = fr.require_string("name");
      const json& conditions = fr.require("conditions");
      if (!conditions.is_array()) fail(r.path(), r.line(), "conditions must be an array");
      for (const json& c : conditions) {
        if (!c.is_string()) fail(r.path(), r.line(), "conditions must hold strings");
        factor.conditions.push_back(c.get<std::string>());
      }
      fr.finish();
      rec.trace.factors.push_back(std::move(factor));
    }
    const json& outcomes = r.require("outcomes");
    if (!outcomes.is_array()) fail(r.path(), r.line(), "outcomes must be an array");
    for (const json& o : outcomes) {
      if (!o.is_string()) fail(r.path(), r.line(), "outcomes must hold strings");
      rec.trace.outcomes.push_back(o.get<std::string>());
    }
    if (const json* g = r.find("gold")) {
      if (!g->is_number_unsigned()) {
        fail(r.path(), r.line(), "gold must be a non-negative outcome index");
      }
      rec.gold = g->get<std::size_t>();
      if (*rec.gold >= rec.trace.outcomes.size()) {
        fail(r.path(), r.line(), "gold outcome index out of range");
      }
    }
    try {
      validate_trace(rec.trace);
    } catch (const ValidationError& e) {
      fail(r.path(), r.line(), e.what());
    }
    return rec;
  });
}

std::vector<ScorerTableRecord> load_scorer_table(const std::string& path) {
  std::unordered_set<std::string> seen;
  return load_lines<ScorerTableRecord>(path, [&](FieldReader& r) {
    ScorerTableRecord rec;
    rec.context = r.require_string("context");
    rec.proposition = r.require_string("proposition");
    rec.score = r.require_probability("score");
    check_unique(seen, rec.context + "\x1f" + rec.proposition, r.path(), r.line());
    return rec;
  });
}

std::vector<TournamentItem> load_tournament_items(const std::string& path) {
  std::unordered_set<std::string> seen;
  return load_lines<TournamentItem>(path, [&](FieldReader& r) {
    TournamentItem rec;
    rec.id = r.require_string("id");
    check_unique(seen, rec.id, r.path(), r.line());
    rec.direct_score = r.require_probability("score");
    return rec;
  });
}

void save_tournament_items(const std::string& path,
                           const std::vector<TournamentItem>& records,
                           const std::string& header) {
  Writer w(path, header);
  for (const TournamentItem& rec : records) {
    w.line(json{{"id", rec.id}, {"score", rec.direct_score}});
  }
}

void save_instances(const std::string& path, const std::vector<Instance>& records,
                    const std::string& header) {
  Writer w(path, header);
  for (const Instance& rec : records) {
    json obj{{"id", rec.id}, {"context", rec.context}, {"proposition", rec.proposition}};
    if (rec.target_scalar) obj["target"] = *rec.target_scalar;
    if (rec.target_bins) obj["target"] = *rec.target_bins;
    switch (rec.source) {
      case Source::human: obj["source"] = "human"; break;
      case Source::synthetic: obj["source"] = "synthetic"; break;
      case Source::unlabeled: obj["source"] = "unlabeled"; break;
    }
    w.line(obj);
  }
}

void save_pairwise(const std::string& path, const std::vector<PairwiseExample>& records,
                   const std::string& header) {
  Writer w(path, header);
  for (const PairwiseExample& rec : records) {
    w.line(json{{"a", rec.a},
                {"b", rec.b},
                {"label", rec.label == PairLabel::a_higher ? "a_higher" : "b_higher"}});
  }
}

void save_rollouts(const std::string& path, const std::vector<RolloutRecord>& records,
                   const std::string& header) {
  Writer w(path, header);
  for (const RolloutRecord& rec : records) {
    json obj{{"instance_id", rec.instance_id},
             {"model", rec.model_name},
             {"estimate", rec.estimate}};
    if (rec.confidence) obj["confidence"] = *rec.confidence;
    if (rec.rationale) obj["rationale"] = *rec.rationale;
    w.line(obj);
  }
}

void save_features(const std::string& path, const std::vector<FeatureRecord>& records,
                   const std::string& header) {
  Writer w(path, header);
  for (const FeatureRecord& rec : records) {
    w.line(json{{"id", rec.id}, {"values", rec.values}});
  }
}

void save_predictions(const std::string& path,
                      const std::vector<PredictionRecord>& records,
                      const std::string& header) {
  Writer w(path, header);
  for (const PredictionRecord& rec : records) {
    w.line(json{{"id", rec.id},
                {"bin", rec.bin},
                {"coarse", rec.coarse},
                {"fine", rec.fine},
                {"probs", rec.probs}});
  }
}

void save_ratings(const std::string& path, const std::vector<RatingRecord>& records,
                  const std::string& header) {
  Writer w(path, header);
  for (const RatingRecord& rec : records) {
    w.line(json{{"id", rec.id},
                {"mu", rec.mu},
                {"sigma", rec.sigma},
                {"mapped_score", rec.mapped_score}});
  }
}

void save_comparison_log(const std::string& path,
                         const std::vector<ComparisonRecord>& records,
                         const std::string& header) {
  Writer w(path, header);
  for (const ComparisonRecord& rec : records) {
    w.line(json{{"a_id", rec.a_id},
                {"b_id", rec.b_id},
                {"outcome", outcome_name(rec.outcome)},
                {"step", rec.step}});
  }
}

void save_comparison_table(const std::string& path,
                           const std::vector<ComparisonTableRecord>& records,
                           const std::string& header) {
  Writer w(path, header);
  for (const ComparisonTableRecord& rec : records) {
    w.line(json{{"a", rec.a}, {"b", rec.b}, {"outcome", outcome_name(rec.outcome)}});
  }
}

void save_fused_targets(const std::string& path,
                        const std::vector<FusedTargetRecord>& records,
                        const std::string& header) {
  Writer w(path, header);
  for (const FusedTargetRecord& rec : records) {
    w.line(json{{"instance_id", rec.instance_id},
                {"discrepancy", rec.discrepancy},
                {"low_discrepancy", rec.low_discrepancy},
                {"weights", rec.weights},
                {"target", rec.target}});
  }
}

void save_maieutic_graphs(const std::string& path,
                          const std::vector<MaieuticGraphRecord>& records,
                          const std::string& header) {
  Writer w(path, header);
  for (const MaieuticGraphRecord& rec : records) {
    json nodes = json::array();
    for (const MaieuticNode& node : rec.graph.nodes) {
      nodes.push_back(json{{"id", node.id},
                           {"statement", node.statement},
                           {"negation", node.negation}});
    }
    json edges = json::array();
    for (const MaieuticEdge& edge : rec.graph.edges) {
      edges.push_back(
          json{{"parent", edge.parent},
               {"child", edge.child},
               {"polarity",
                edge.polarity == EdgePolarity::supports ? "supports" : "refutes"}});
    }
    json obj{{"id", rec.id}, {"root", rec.graph.root}, {"nodes", nodes}, {"edges", edges}};
    if (rec.gold) obj["gold"] = *rec.gold;
    w.line(obj);
  }
}

void save_bird_traces(const std::string& path,
                      const std::vector<BirdTraceRecord>& records,
                      const std::string& header) {
  Writer w(path, header);
  for (const BirdTraceRecord& rec : records) {
    json factors = json::array();
    for (const BirdFactor& factor : rec.trace.factors) {
      factors.push_back(json{{"name", factor.name}, {"conditions", factor.conditions}});
    }
    json obj{{"id", rec.id},
             {"context", rec.trace.context},
             {"factors", factors},
             {"outcomes", rec.trace.outcomes}};
    if (!rec.trace.additional_sentence.empty()) {
      obj["additional_sentence"] = rec.trace.additional_sentence;
    }
    if (rec.gold) obj["gold"] = *rec.gold;
    w.line(obj);
  }
}

void save_scorer_table(const std::string& path,
                       const std::vector<ScorerTableRecord>& records,
                       const std::string& header) {
  Writer w(path, header);
  for (const ScorerTableRecord& rec : records) {
    w.line(json{{"context", rec.context},
                {"proposition", rec.proposition},
                {"score", rec.score}});
  }
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  json obj;
  try {
    in >> obj;
  } catch (const json::exception& e) {
    throw ValidationError(path + ": parse error: " + e.what());
  }
  FieldReader r(obj, path, 1);
  ModelFile model;
  model.head.dim = r.require_count("dim");
  model.n_bins = r.require_count("n_bins");
  model.head.n_bins = model.n_bins;
  model.head.weights = r.require_number_array("weights");
  model.head.bias = r.require_number_array("bias");
  model.featurizer_seed = r.require_count("featurizer_seed");
  if (const json* c = r.find("config")) {
    model.config_json = c->dump();
  }
  r.finish();
  try {
    validate_head(model.head);
  } catch (const std::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return model;
}

void save_model(const std::string& path, const ModelFile& model) {
  json obj{{"dim", model.head.dim},
           {"n_bins", model.n_bins},
           {"weights", model.head.weights},
           {"bias", model.head.bias},
           {"featurizer_seed", model.featurizer_seed}};
  if (!model.config_json.empty()) {
    obj["config"] = json::parse(model.config_json);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  out << obj.dump(2) << '\n';
}

}  // namespace odds
