#include "odds/jsonl.hpp"

#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "odds/errors.hpp"
#include "odds/random.hpp"

using namespace odds;
namespace fs = std::filesystem;

namespace {

struct TmpDir {
  fs::path path;
  TmpDir() {
    path = fs::temp_directory_path() /
           ("odds_jsonl_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TmpDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
  static int& counter() {
    static int n = 0;
    return n;
  }
};

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  for (const std::string& line : lines) out << line << '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("an empty file loads as an empty list") {
  TmpDir tmp;
  write_lines(tmp.file("empty.jsonl"), {});
  CHECK(load_instances(tmp.file("empty.jsonl")).empty());
}

TEST_CASE("a single valid line loads as one instance") {
  TmpDir tmp;
  write_lines(tmp.file("one.jsonl"),
              {R"({"id":"a","context":"c","proposition":"p","target":0.7,"source":"human"})"});
  const std::vector<Instance> instances = load_instances(tmp.file("one.jsonl"));
  REQUIRE(instances.size() == 1);
  CHECK(instances[0].id == "a");
  CHECK(instances[0].source == Source::human);
  REQUIRE(instances[0].target_scalar.has_value());
  CHECK(*instances[0].target_scalar == 0.7);
}

TEST_CASE("loader errors carry the file and line number") {
  TmpDir tmp;
  write_lines(tmp.file("bad.jsonl"),
              {R"({"id":"a","context":"c","proposition":"p","target":1.5})"});
  try {
    load_instances(tmp.file("bad.jsonl"));
    FAIL("expected a range error");
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    CHECK(what.find(":1:") != std::string::npos);
    CHECK(what.find("[0,1]") != std::string::npos);
  }

  write_lines(tmp.file("dup.jsonl"),
              {R"({"id":"a","context":"c","proposition":"p"})",
               R"({"id":"a","context":"c2","proposition":"p2"})"});
  try {
    load_instances(tmp.file("dup.jsonl"));
    FAIL("expected a duplicate error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
  }

  write_lines(tmp.file("junk.jsonl"), {"{not json"});
  CHECK_THROWS_AS(load_instances(tmp.file("junk.jsonl")), ValidationError);

  write_lines(tmp.file("unknown.jsonl"),
              {R"({"id":"a","context":"c","proposition":"p","targt":0.5})"});
  try {
    load_instances(tmp.file("unknown.jsonl"));
    FAIL("expected an unknown-field error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("targt") != std::string::npos);
  }
}

TEST_CASE("header lines are skipped on load") {
  TmpDir tmp;
  write_lines(tmp.file("with_header.jsonl"),
              {R"({"type":"header","config":{"seed":42}})",
               R"({"id":"a","context":"c","proposition":"p"})"});
  CHECK(load_instances(tmp.file("with_header.jsonl")).size() == 1);
}

TEST_CASE("record round trips are exact") {
  TmpDir tmp;
  Rng rng = stream_rng(109, 0);

  std::vector<Instance> instances;
  for (int i = 0; i < 30; ++i) {
    Instance rec;
    rec.id = "inst" + std::to_string(i);
    rec.context = "context " + std::to_string(i);
    rec.proposition = "proposition " + std::to_string(i);
    const double pick = uniform01(rng);
    if (pick < 0.4) {
      rec.target_scalar = uniform01(rng);
    } else if (pick < 0.7) {
      std::vector<double> bins(5);
      double sum = 0.0;
      for (double& b : bins) {
        b = uniform01(rng) + 1e-9;
        sum += b;
      }
      for (double& b : bins) b /= sum;
      // Make the mass provably sum to 1 after serialization.
      bins[4] = 1.0 - bins[0] - bins[1] - bins[2] - bins[3];
      rec.target_bins = bins;
    }
    rec.source = pick < 0.3 ? Source::human : (pick < 0.8 ? Source::synthetic : Source::unlabeled);
    instances.push_back(rec);
  }
  save_instances(tmp.file("instances.jsonl"), instances);
  const std::vector<Instance> loaded = load_instances(tmp.file("instances.jsonl"));
  REQUIRE(loaded.size() == instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    CHECK(loaded[i].id == instances[i].id);
    CHECK(loaded[i].context == instances[i].context);
    CHECK(loaded[i].proposition == instances[i].proposition);
    CHECK(loaded[i].target_scalar == instances[i].target_scalar);
    CHECK(loaded[i].target_bins == instances[i].target_bins);
    CHECK(loaded[i].source == instances[i].source);
  }

  std::vector<PairwiseExample> pairs;
  for (int i = 0; i < 20; ++i) {
    pairs.push_back({"a" + std::to_string(i), "b" + std::to_string(i),
                     below(rng, 2) == 0 ? PairLabel::a_higher : PairLabel::b_higher});
  }
  save_pairwise(tmp.file("pairs.jsonl"), pairs);
  const std::vector<PairwiseExample> loaded_pairs = load_pairwise(tmp.file("pairs.jsonl"));
  REQUIRE(loaded_pairs.size() == pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    CHECK(loaded_pairs[i].a == pairs[i].a);
    CHECK(loaded_pairs[i].b == pairs[i].b);
    CHECK(loaded_pairs[i].label == pairs[i].label);
  }

  std::vector<RolloutRecord> rollouts;
  for (int i = 0; i < 20; ++i) {
    RolloutRecord rec;
    rec.instance_id = "inst" + std::to_string(i % 7);
    rec.model_name = "model" + std::to_string(i % 3);
    rec.estimate = uniform01(rng);
    if (below(rng, 2) == 0) rec.confidence = uniform01(rng);
    if (below(rng, 3) == 0) rec.rationale = "because " + std::to_string(i);
    rollouts.push_back(rec);
  }
  save_rollouts(tmp.file("rollouts.jsonl"), rollouts);
  const std::vector<RolloutRecord> loaded_rollouts =
      load_rollouts(tmp.file("rollouts.jsonl"));
  REQUIRE(loaded_rollouts.size() == rollouts.size());
  for (std::size_t i = 0; i < rollouts.size(); ++i) {
    CHECK(loaded_rollouts[i].instance_id == rollouts[i].instance_id);
    CHECK(loaded_rollouts[i].model_name == rollouts[i].model_name);
    CHECK(loaded_rollouts[i].estimate == rollouts[i].estimate);
    CHECK(loaded_rollouts[i].confidence == rollouts[i].confidence);
    CHECK(loaded_rollouts[i].rationale == rollouts[i].rationale);
  }

  std::vector<FeatureRecord> features;
  for (int i = 0; i < 10; ++i) {
    FeatureRecord rec;
    rec.id = "f" + std::to_string(i);
    for (int k = 0; k < 8; ++k) rec.values.push_back(normal(rng));
    features.push_back(rec);
  }
  save_features(tmp.file("features.jsonl"), features);
  const std::vector<FeatureRecord> loaded_features =
      load_features(tmp.file("features.jsonl"));
  REQUIRE(loaded_features.size() == features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    CHECK(loaded_features[i].id == features[i].id);
    CHECK(loaded_features[i].values == features[i].values);
  }

  std::vector<ComparisonRecord> log;
  for (int i = 0; i < 15; ++i) {
    log.push_back({"x" + std::to_string(i), "y" + std::to_string(i),
                   static_cast<Outcome>(below(rng, 3)), static_cast<std::size_t>(i)});
  }
  save_comparison_log(tmp.file("log.jsonl"), log);
  const std::vector<ComparisonRecord> loaded_log =
      load_comparison_log(tmp.file("log.jsonl"));
  REQUIRE(loaded_log.size() == log.size());
  for (std::size_t i = 0; i < log.size(); ++i) {
    CHECK(loaded_log[i].a_id == log[i].a_id);
    CHECK(loaded_log[i].b_id == log[i].b_id);
    CHECK(loaded_log[i].outcome == log[i].outcome);
    CHECK(loaded_log[i].step == log[i].step);
  }

  std::vector<RatingRecord> ratings;
  for (int i = 0; i < 12; ++i) {
    ratings.push_back({"r" + std::to_string(i), normal(rng), uniform_in(rng, 0.1, 3.0),
                       uniform01(rng)});
  }
  save_ratings(tmp.file("ratings.jsonl"), ratings);
  const std::vector<RatingRecord> loaded_ratings = load_ratings(tmp.file("ratings.jsonl"));
  REQUIRE(loaded_ratings.size() == ratings.size());
  for (std::size_t i = 0; i < ratings.size(); ++i) {
    CHECK(loaded_ratings[i].mu == ratings[i].mu);
    CHECK(loaded_ratings[i].sigma == ratings[i].sigma);
    CHECK(loaded_ratings[i].mapped_score == ratings[i].mapped_score);
  }

  std::vector<MaieuticGraphRecord> graphs;
  for (int g = 0; g < 5; ++g) {
    MaieuticGraphRecord rec;
    rec.id = "g" + std::to_string(g);
    for (int i = 0; i < 4; ++i) {
      const std::string nid = "n" + std::to_string(i);
      rec.graph.nodes.push_back({nid, nid + " holds", nid + " fails"});
    }
    rec.graph.root = "n0";
    rec.graph.edges.push_back({"n0", "n2", EdgePolarity::supports});
    rec.graph.edges.push_back({"n1", "n3", EdgePolarity::refutes});
    if (g % 2 == 0) rec.gold = g % 4 == 0;
    graphs.push_back(rec);
  }
  save_maieutic_graphs(tmp.file("graphs.jsonl"), graphs);
  const std::vector<MaieuticGraphRecord> loaded_graphs =
      load_maieutic_graphs(tmp.file("graphs.jsonl"));
  REQUIRE(loaded_graphs.size() == graphs.size());
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    CHECK(loaded_graphs[i].id == graphs[i].id);
    CHECK(loaded_graphs[i].graph.root == graphs[i].graph.root);
    CHECK(loaded_graphs[i].graph.nodes.size() == graphs[i].graph.nodes.size());
    CHECK(loaded_graphs[i].graph.edges.size() == graphs[i].graph.edges.size());
    CHECK(loaded_graphs[i].gold == graphs[i].gold);
  }

  std::vector<BirdTraceRecord> traces;
  for (int t = 0; t < 5; ++t) {
    BirdTraceRecord rec;
    rec.id = "t" + std::to_string(t);
    rec.trace.context = "ctx " + std::to_string(t);
    if (t % 2 == 1) rec.trace.additional_sentence = "extra";
    rec.trace.factors = {{"f1", {"c1", "c2"}}, {"f2", {"c3"}}};
    rec.trace.outcomes = {"o1", "o2", "o3"};
    if (t % 2 == 0) rec.gold = static_cast<std::size_t>(t % 3);
    traces.push_back(rec);
  }
  save_bird_traces(tmp.file("traces.jsonl"), traces);
  const std::vector<BirdTraceRecord> loaded_traces =
      load_bird_traces(tmp.file("traces.jsonl"));
  REQUIRE(loaded_traces.size() == traces.size());
  for (std::size_t i = 0; i < traces.size(); ++i) {
    CHECK(loaded_traces[i].trace.context == traces[i].trace.context);
    CHECK(loaded_traces[i].trace.additional_sentence == traces[i].trace.additional_sentence);
    CHECK(loaded_traces[i].gold == traces[i].gold);
    CHECK(loaded_traces[i].trace.outcomes == traces[i].trace.outcomes);
  }
}

TEST_CASE("saving twice produces byte-identical files") {
  TmpDir tmp;
  Rng rng = stream_rng(113, 0);
  std::vector<PredictionRecord> preds;
  for (int i = 0; i < 10; ++i) {
    PredictionRecord rec;
    rec.id = "p" + std::to_string(i);
    rec.probs = {0.25, 0.25, 0.25, 0.25};
    rec.probs[i % 4] += 0.1;
    rec.probs[(i + 1) % 4] -= 0.1;
    rec.bin = static_cast<std::size_t>(i % 4);
    rec.coarse = 0.125 + 0.25 * static_cast<double>(rec.bin);
    rec.fine = uniform01(rng);
    preds.push_back(rec);
  }
  save_predictions(tmp.file("a.jsonl"), preds, R"({"seed":42})");
  save_predictions(tmp.file("b.jsonl"), preds, R"({"seed":42})");
  CHECK(read_file(tmp.file("a.jsonl")) == read_file(tmp.file("b.jsonl")));
  CHECK(!read_file(tmp.file("a.jsonl")).empty());
  const std::vector<PredictionRecord> loaded = load_predictions(tmp.file("a.jsonl"));
  REQUIRE(loaded.size() == preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    CHECK(loaded[i].fine == preds[i].fine);
    CHECK(loaded[i].probs == preds[i].probs);
  }
}

TEST_CASE("model files round trip") {
  TmpDir tmp;
  ModelFile model;
  model.head.dim = 3;
  model.head.n_bins = 4;
  model.n_bins = 4;
  model.head.weights = {0.1, -0.2, 0.3, 0.4, 0.5, -0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2};
  model.head.bias = {0.01, 0.02, 0.03, 0.04};
  model.featurizer_seed = 7;
  model.config_json = R"({"n_bins":4,"seed":7})";
  save_model(tmp.file("model.json"), model);
  const ModelFile loaded = load_model(tmp.file("model.json"));
  CHECK(loaded.head.dim == model.head.dim);
  CHECK(loaded.head.weights == model.head.weights);
  CHECK(loaded.head.bias == model.head.bias);
  CHECK(loaded.featurizer_seed == model.featurizer_seed);
  CHECK(!loaded.config_json.empty());
}

TEST_CASE("missing files and malformed pairs are validation errors") {
  TmpDir tmp;
  CHECK_THROWS_AS(load_instances(tmp.file("missing.jsonl")), ValidationError);
  write_lines(tmp.file("selfpair.jsonl"), {R"({"a":"x","b":"x","label":"a_higher"})"});
  CHECK_THROWS_AS(load_pairwise(tmp.file("selfpair.jsonl")), ValidationError);
}
