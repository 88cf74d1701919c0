#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <unordered_map>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "odds/errors.hpp"
#include "odds/fusion.hpp"
#include "odds/jsonl.hpp"
#include "odds/losses.hpp"
#include "odds/metrics.hpp"
#include "odds/random.hpp"
#include "odds/run_config.hpp"
#include "odds/tournament.hpp"

namespace odds::cli {
namespace {

using nlohmann::json;

struct Common {
  std::string config_path;
  std::int64_t seed = -1;  // negative means "not given"
  bool unit_scale = false;
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--config", common.config_path, "JSON file with run configuration");
  cmd->add_option("--seed", common.seed, "Override the config seed");
}

// Precedence: config file < --seed flag < ODDS_SEED environment variable.
RunConfig resolve_config(const Common& common) {
  RunConfig config =
      common.config_path.empty() ? RunConfig{} : load_run_config(common.config_path);
  if (common.seed >= 0) config.seed = static_cast<std::uint64_t>(common.seed);
  if (const char* env = std::getenv("ODDS_SEED")) {
    try {
      config.seed = std::stoull(env);
    } catch (const std::exception&) {
      throw ValidationError("ODDS_SEED must be a non-negative integer, got '" +
                            std::string(env) + "'");
    }
  }
  if (common.unit_scale) config = with_unit_scale_preset(config);
  return resolve(config);
}

std::string config_header(const RunConfig& config) {
  return std::string("{\"config\":") + to_json(config) + "}";
}

void emit(const json& doc, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << doc.dump(2) << '\n';
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ValidationError("cannot open '" + out_path + "' for writing");
  out << doc.dump(2) << '\n';
}

// Features come either from a precomputed file or the hashed featurizer.
class FeatureSource {
 public:
  FeatureSource(const std::string& features_path, const RunConfig& config)
      : dim_(config.feature_dim), seed_(config.seed) {
    if (!features_path.empty()) {
      for (FeatureRecord& rec : load_features(features_path)) {
        if (precomputed_.empty()) dim_ = rec.values.size();
        if (rec.values.size() != dim_) {
          throw ValidationError("feature file mixes dimensions");
        }
        precomputed_.emplace(rec.id, std::move(rec.values));
      }
      use_precomputed_ = true;
    }
  }

  FeatureVector get(const Instance& instance) const {
    if (use_precomputed_) {
      const auto it = precomputed_.find(instance.id);
      if (it == precomputed_.end()) {
        throw ValidationError("no precomputed features for instance '" + instance.id +
                              "'");
      }
      return FeatureVector{it->second};
    }
    return hashed_featurizer(instance.context, instance.proposition, dim_, seed_);
  }

  std::size_t dim() const { return dim_; }

 private:
  std::size_t dim_;
  std::uint64_t seed_;
  bool use_precomputed_ = false;
  std::unordered_map<std::string, std::vector<double>> precomputed_;
};

BinDistribution instance_target(const Instance& instance, const RunConfig& config,
                                const BinSchema& schema) {
  if (instance.target_bins) {
    if (instance.target_bins->size() != schema.n_bins) {
      throw ValidationError("instance '" + instance.id + "' has a " +
                            std::to_string(instance.target_bins->size()) +
                            "-bin target but n_bins is " +
                            std::to_string(schema.n_bins));
    }
    return BinDistribution{*instance.target_bins};
  }
  double y = *instance.target_scalar;
  if (config.unli_invert) {
    // Undo a unit logistic annotation scale, then re-squash with the
    // configured scale/offset; identity under the defaults.
    const LogisticMap unit;
    y = unli_map(config).forward(unit.inverse(y).value);
  }
  return quantize_scalar(y, QuantizeParams{config.sigma}, schema);
}

int cmd_quantize(const Common& common, double y, double sigma_flag, std::int64_t bins_flag,
                 const std::string& out_path) {
  RunConfig config = resolve_config(common);
  if (sigma_flag > 0.0) config.sigma = sigma_flag;
  if (bins_flag > 0) config.n_bins = static_cast<std::size_t>(bins_flag);
  config = resolve(config);

  const BinSchema schema = make_schema(config.n_bins);
  const BinDistribution dist =
      quantize_scalar(y, QuantizeParams{config.sigma}, schema);
  const auto [bin, center] = greedy_decode(dist, schema);
  const json doc{{"config", json::parse(to_json(config))},
                 {"y", y},
                 {"probs", dist.probs},
                 {"expected_decode", expected_decode(dist, schema)},
                 {"greedy_bin", bin},
                 {"greedy_center", center}};
  emit(doc, out_path);
  return 0;
}

int cmd_fuse(const Common& common, const std::string& rollouts_path,
             const std::string& out_path) {
  const RunConfig config = resolve_config(common);
  const BinSchema schema = make_schema(config.n_bins);
  const FusionConfig fusion = fusion_config(config);

  // Group rollouts per instance in order of first appearance.
  const std::vector<RolloutRecord> rollouts = load_rollouts(rollouts_path);
  std::vector<std::string> order;
  std::unordered_map<std::string, SyntheticAnnotationSet> sets;
  for (const RolloutRecord& rec : rollouts) {
    auto [it, inserted] = sets.try_emplace(rec.instance_id);
    if (inserted) {
      it->second.instance_id = rec.instance_id;
      order.push_back(rec.instance_id);
    }
    it->second.estimates.push_back(rec.estimate);
    it->second.confidences.push_back(rec.confidence.value_or(1.0));
  }

  std::vector<FusedTargetRecord> fused;
  for (const std::string& id : order) {
    SyntheticAnnotationSet set = sets.at(id);
    FusedTargetRecord rec;
    rec.instance_id = id;
    rec.discrepancy = discrepancy(set.estimates);
    rec.low_discrepancy = rec.discrepancy <= config.discrepancy_threshold;
    if (rec.low_discrepancy) {
      // Low-discrepancy sets keep their raw scores with equal weights; the
      // judge confidences only matter for flagged sets.
      std::fill(set.confidences.begin(), set.confidences.end(), 1.0);
    }
    rec.weights = confidence_weights(set.confidences, fusion.alpha);
    rec.target = fuse_confidence_weighted(set, fusion, schema).probs;
    fused.push_back(std::move(rec));
  }
  save_fused_targets(out_path, fused, config_header(config));
  return 0;
}

int cmd_rank(const Common& common, const std::string& items_path,
             const std::string& comparisons_path, const std::string& out_path,
             const std::string& log_path) {
  const RunConfig config = resolve_config(common);
  const std::vector<TournamentItem> items = load_tournament_items(items_path);

  std::map<std::pair<std::string, std::string>, Outcome> table;
  for (const ComparisonTableRecord& rec : load_comparison_table(comparisons_path)) {
    table[{rec.a, rec.b}] = rec.outcome;
  }
  const Comparator comparator = [&table](const std::string& a, const std::string& b) {
    const auto it = table.find({a, b});
    if (it != table.end()) return it->second;
    const auto flipped = table.find({b, a});
    if (flipped != table.end()) {
      switch (flipped->second) {
        case Outcome::a_wins: return Outcome::b_wins;
        case Outcome::b_wins: return Outcome::a_wins;
        case Outcome::draw: return Outcome::draw;
      }
    }
    throw ValidationError("comparison table has no entry for ('" + a + "', '" + b +
                          "')");
  };

  const TournamentResult result =
      run_tournament(items, comparator, tournament_config(config));
  const std::vector<double> mapped =
      plackett_luce_map(result.ratings, config.pl_temperature);

  std::vector<RatingRecord> ratings;
  for (std::size_t i = 0; i < items.size(); ++i) {
    ratings.push_back({result.ids[i], result.ratings[i].mu, result.ratings[i].sigma,
                       mapped[i]});
  }
  json header{{"config", json::parse(to_json(config))},
              {"reached_budget", result.reached_budget},
              {"uninformative", result.uninformative},
              {"comparisons", result.log.size()}};
  save_ratings(out_path, ratings, header.dump());
  if (!log_path.empty()) {
    save_comparison_log(log_path, result.log, header.dump());
  }
  return 0;
}

int cmd_train(const Common& common, const std::string& instances_path,
              const std::string& pairwise_path, const std::string& features_path,
              const std::string& fused_path, const std::string& out_path,
              const std::string& history_path) {
  const RunConfig config = resolve_config(common);
  const BinSchema schema = make_schema(config.n_bins);
  const std::vector<Instance> instances = load_instances(instances_path);
  const FeatureSource features(features_path, config);

  std::unordered_map<std::string, const Instance*> by_id;
  for (const Instance& inst : instances) by_id[inst.id] = &inst;

  std::unordered_map<std::string, std::vector<double>> fused_targets;
  if (!fused_path.empty()) {
    for (FusedTargetRecord& rec : load_fused_targets(fused_path)) {
      if (rec.target.size() != schema.n_bins) {
        throw ValidationError("fused target for '" + rec.instance_id + "' has " +
                              std::to_string(rec.target.size()) +
                              " bins, expected " + std::to_string(schema.n_bins));
      }
      if (by_id.find(rec.instance_id) == by_id.end()) {
        throw ValidationError("fused target references unknown instance '" +
                              rec.instance_id + "'");
      }
      fused_targets.emplace(rec.instance_id, std::move(rec.target));
    }
  }

  TrainingData data;
  for (const Instance& inst : instances) {
    const auto fused_it = fused_targets.find(inst.id);
    if (fused_it != fused_targets.end()) {
      data.synthetic.push_back({features.get(inst), BinDistribution{fused_it->second}});
      continue;
    }
    if (!inst.target_scalar && !inst.target_bins) continue;
    DirectExample ex{features.get(inst), instance_target(inst, config, schema)};
    if (inst.source == Source::synthetic) {
      data.synthetic.push_back(std::move(ex));
    } else {
      data.human.push_back(std::move(ex));
    }
  }

  if (!pairwise_path.empty()) {
    for (const PairwiseExample& pair : load_pairwise(pairwise_path)) {
      const auto a = by_id.find(pair.a);
      const auto b = by_id.find(pair.b);
      if (a == by_id.end() || b == by_id.end()) {
        throw ValidationError("pairwise example references unknown instance '" +
                              (a == by_id.end() ? pair.a : pair.b) + "'");
      }
      data.pairwise.push_back(
          {features.get(*a->second), features.get(*b->second), order_sign(pair.label)});
    }
  }

  const TrainResult result = train(data, schema, train_config(config));

  ModelFile model;
  model.head = result.params;
  model.n_bins = schema.n_bins;
  model.featurizer_seed = config.seed;
  model.config_json = to_json(config);
  save_model(out_path, model);

  if (!history_path.empty()) {
    std::ofstream out(history_path, std::ios::binary);
    if (!out) throw ValidationError("cannot open '" + history_path + "' for writing");
    out << config_header(config) << '\n';
    for (std::size_t step = 0; step < result.history.size(); ++step) {
      const LossReport& r = result.history[step];
      out << json{{"step", step},
                  {"total", r.total},
                  {"direct_human", r.direct_human},
                  {"direct_synthetic", r.direct_synthetic},
                  {"rank", r.rank}}
                 .dump()
          << '\n';
    }
  }
  return 0;
}

int cmd_predict(const Common& common, const std::string& model_path,
                const std::string& instances_path, const std::string& features_path,
                const std::string& out_path) {
  const RunConfig config = resolve_config(common);
  const ModelFile model = load_model(model_path);
  const BinSchema schema = make_schema(model.n_bins);

  RunConfig feature_config = config;
  feature_config.feature_dim = model.head.dim;
  feature_config.seed = model.featurizer_seed;
  const FeatureSource features(features_path, feature_config);
  if (features.dim() != model.head.dim) {
    throw ValidationError("feature dimension " + std::to_string(features.dim()) +
                          " does not match the model (" +
                          std::to_string(model.head.dim) + ")");
  }

  std::vector<PredictionRecord> predictions;
  for (const Instance& inst : load_instances(instances_path)) {
    const BinDistribution dist = forward(model.head, features.get(inst));
    const auto [bin, center] = greedy_decode(dist, schema);
    predictions.push_back(
        {inst.id, bin, center, expected_decode(dist, schema), dist.probs});
  }
  save_predictions(out_path, predictions, config_header(config));
  return 0;
}

int cmd_eval(const Common& common, const std::string& pred_path,
             const std::string& gold_path, const std::string& out_path) {
  const RunConfig config = resolve_config(common);
  const std::vector<PredictionRecord> predictions = load_predictions(pred_path);
  const std::vector<Instance> golds = load_instances(gold_path);

  std::unordered_map<std::string, double> pred_by_id;
  for (const PredictionRecord& rec : predictions) pred_by_id[rec.id] = rec.fine;

  std::vector<double> preds, targets;
  for (const Instance& inst : golds) {
    double gold;
    if (inst.target_scalar) {
      gold = *inst.target_scalar;
    } else if (inst.target_bins) {
      const BinSchema schema = make_schema(inst.target_bins->size());
      gold = expected_decode(BinDistribution{*inst.target_bins}, schema);
    } else {
      continue;
    }
    const auto it = pred_by_id.find(inst.id);
    if (it == pred_by_id.end()) {
      throw ValidationError("no prediction for instance '" + inst.id + "'");
    }
    preds.push_back(it->second);
    targets.push_back(gold);
  }
  if (preds.empty()) throw ValidationError("no labeled instances to evaluate");

  double mae = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) mae += std::abs(preds[i] - targets[i]);
  mae /= static_cast<double>(preds.size());

  json metrics{{"n", preds.size()},
               {"spearman", spearman(preds, targets)},
               {"ranking_risk", ranking_risk(preds, targets)},
               {"mae", mae}};

  bool binary = true;
  for (double g : targets) {
    if (g != 0.0 && g != 1.0) binary = false;
  }
  if (binary) {
    std::vector<int> labels;
    for (double g : targets) labels.push_back(g == 1.0 ? 1 : 0);
    metrics["brier"] = brier(preds, labels);
    metrics["ece"] = ece(preds, labels, config.ece_bins);
  }

  emit(json{{"config", json::parse(to_json(config))}, {"metrics", metrics}}, out_path);
  return 0;
}

int cmd_trace_score(const Common& common, const std::string& maieutic_path,
                    const std::string& bird_path, const std::string& scorer_path,
                    const std::string& model_path, const std::string& out_path) {
  const RunConfig config = resolve_config(common);
  if (maieutic_path.empty() && bird_path.empty()) {
    throw ValidationError("trace-score needs --maieutic and/or --bird traces");
  }
  if (scorer_path.empty() == model_path.empty()) {
    throw ValidationError("trace-score needs exactly one of --scorer or --model");
  }

  std::unique_ptr<Scorer> scorer;
  if (!scorer_path.empty()) {
    auto table = std::make_unique<TableScorer>();
    for (const ScorerTableRecord& rec : load_scorer_table(scorer_path)) {
      table->add(rec.context, rec.proposition, rec.score);
    }
    scorer = std::move(table);
  } else {
    const ModelFile model = load_model(model_path);
    scorer = std::make_unique<HeadScorer>(model.head, make_schema(model.n_bins),
                                          model.featurizer_seed);
  }

  json lines = json::array();
  std::size_t with_gold = 0;
  std::size_t correct = 0;

  if (!maieutic_path.empty()) {
    for (const MaieuticGraphRecord& rec : load_maieutic_graphs(maieutic_path)) {
      const MaieuticWeights weights = maieutic_weights(rec.graph, *scorer);
      const MaieuticSolution solution = solve_maieutic(weights, rec.graph);
      json assignment = json::object();
      for (std::size_t i = 0; i < rec.graph.nodes.size(); ++i) {
        assignment[rec.graph.nodes[i].id] =
            static_cast<bool>(solution.assignment.values[i]);
      }
      json line{{"id", rec.id},
                {"kind", "maieutic"},
                {"root_value", solution.root_value},
                {"objective", solution.assignment.objective},
                {"assignment", assignment}};
      if (rec.gold) {
        ++with_gold;
        const bool ok = solution.root_value == *rec.gold;
        if (ok) ++correct;
        line["correct"] = ok;
      }
      lines.push_back(line);
    }
  }
  if (!bird_path.empty()) {
    for (const BirdTraceRecord& rec : load_bird_traces(bird_path)) {
      const std::vector<double> dist = score_bird(rec.trace, *scorer);
      const auto it = std::max_element(dist.begin(), dist.end());
      const bool tied = std::count(dist.begin(), dist.end(), *it) > 1;
      const std::size_t argmax = static_cast<std::size_t>(it - dist.begin());
      json line{{"id", rec.id},
                {"kind", "bird"},
                {"distribution", dist},
                {"argmax", argmax},
                {"tied", tied}};
      if (rec.gold) {
        ++with_gold;
        const bool ok = !tied && argmax == *rec.gold;
        if (ok) ++correct;
        line["correct"] = ok;
      }
      lines.push_back(line);
    }
  }

  json header{{"config", json::parse(to_json(config))}, {"type", "header"}};
  if (with_gold > 0) {
    header["accuracy"] = static_cast<double>(correct) / static_cast<double>(with_gold);
    header["labeled"] = with_gold;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ValidationError("cannot open '" + out_path + "' for writing");
  out << header.dump() << '\n';
  for (const json& line : lines) out << line.dump() << '\n';
  return 0;
}

int cmd_gradcheck(const Common& common, std::size_t trials, const std::string& out_path) {
  const RunConfig config = resolve_config(common);
  const BinSchema schema = make_schema(config.n_bins);
  Rng rng = stream_rng(config.seed, 99);

  const auto random_logits = [&](std::size_t n) {
    std::vector<double> out(n);
    for (double& z : out) z = 6.0 * (uniform01(rng) - 0.5);
    return out;
  };

  double kl_err = 0.0, margin_err = 0.0, decode_err = 0.0, mse_err = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::vector<double> point = random_logits(schema.n_bins);

    BinDistribution target;
    double sum = 0.0;
    for (std::size_t j = 0; j < schema.n_bins; ++j) {
      target.probs.push_back(uniform01(rng) + 1e-3);
      sum += target.probs.back();
    }
    for (double& q : target.probs) q /= sum;
    const LossGrad kl = kl_direct_loss(target, point);
    kl_err = std::max(kl_err, grad_check(
                                  [&](const std::vector<double>& z) {
                                    return kl_direct_loss(target, z).loss;
                                  },
                                  point, kl.grad, 1e-5));

    const DecodeGrad dg = expected_decode_from_logits(point, schema);
    decode_err = std::max(decode_err, grad_check(
                                          [&](const std::vector<double>& z) {
                                            return expected_decode_from_logits(z, schema)
                                                .value;
                                          },
                                          point, dg.grad, 1e-5));

    const double s = uniform01(rng);
    const MseReference mse = mse_loss_reference(point, s, schema);
    mse_err = std::max(mse_err, grad_check(
                                    [&](const std::vector<double>& z) {
                                      return mse_loss_reference(z, s, schema).loss;
                                    },
                                    point, mse.grad, 1e-5));
  }

  std::size_t margin_checked = 0;
  while (margin_checked < trials) {
    const std::vector<double> a = random_logits(schema.n_bins);
    const std::vector<double> b = random_logits(schema.n_bins);
    const int sign = below(rng, 2) == 0 ? 1 : -1;
    const PairLossGrad pl = margin_rank_loss(a, b, sign, config.margin_delta, schema);
    if (std::abs(config.margin_delta - sign * (pl.decode_a - pl.decode_b)) < 1e-3) {
      continue;  // skip points near the hinge kink
    }
    margin_err = std::max(
        margin_err,
        grad_check(
            [&](const std::vector<double>& z) {
              return margin_rank_loss(z, b, sign, config.margin_delta, schema).loss;
            },
            a, pl.grad_a, 1e-5));
    margin_err = std::max(
        margin_err,
        grad_check(
            [&](const std::vector<double>& z) {
              return margin_rank_loss(a, z, sign, config.margin_delta, schema).loss;
            },
            b, pl.grad_b, 1e-5));
    ++margin_checked;
  }

  const double threshold = 1e-4;
  const bool pass = kl_err < threshold && margin_err < threshold &&
                    decode_err < threshold && mse_err < threshold;
  const json doc{{"config", json::parse(to_json(config))},
                 {"trials", trials},
                 {"threshold", threshold},
                 {"max_rel_error",
                  {{"kl_direct_loss", kl_err},
                   {"margin_rank_loss", margin_err},
                   {"expected_decode", decode_err},
                   {"mse_loss_reference", mse_err}}},
                 {"pass", pass}};
  emit(doc, out_path);
  if (!pass) throw NumericError("gradient check exceeded the 1e-4 threshold");
  return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"Fine-grained conditional probability estimation toolkit"};
  app.require_subcommand(1);

  Common common;

  // quantize
  double q_y = 0.0;
  double q_sigma = -1.0;
  std::int64_t q_bins = -1;
  std::string q_out;
  CLI::App* quantize = app.add_subcommand("quantize", "Print the quantized target for (y, sigma, bins)");
  add_common(quantize, common);
  quantize->add_option("--y", q_y, "Target scalar in [0,1]")->required();
  quantize->add_option("--sigma", q_sigma, "Gaussian sigma (default from config)");
  quantize->add_option("--bins", q_bins, "Bin count (default from config)");
  quantize->add_option("--out", q_out, "Output file (default stdout)");

  // fuse
  std::string f_rollouts, f_out;
  CLI::App* fuse = app.add_subcommand("fuse", "Fuse recorded rollouts into training targets");
  add_common(fuse, common);
  fuse->add_option("--rollouts", f_rollouts, "Rollouts JSONL")->required();
  fuse->add_option("--out", f_out, "Fused targets JSONL")->required();

  // rank
  std::string r_items, r_comparisons, r_out, r_log;
  CLI::App* rank = app.add_subcommand("rank", "Run a comparison tournament from a table comparator");
  add_common(rank, common);
  rank->add_option("--items", r_items, "Items JSONL (id, score)")->required();
  rank->add_option("--comparisons", r_comparisons, "Comparison table JSONL")->required();
  rank->add_option("--out", r_out, "Ratings output JSONL")->required();
  rank->add_option("--log", r_log, "Comparison log output JSONL");
  rank->add_flag("--unit-scale", common.unit_scale,
                 "Unit-interval initial means, sigma 3, random pairing, no binning");

  // train
  std::string t_instances, t_pairwise, t_features, t_fused, t_out, t_history;
  CLI::App* train_cmd = app.add_subcommand("train", "Train the probability head");
  add_common(train_cmd, common);
  train_cmd->add_option("--instances", t_instances, "Instances JSONL")->required();
  train_cmd->add_option("--pairwise", t_pairwise, "Pairwise examples JSONL");
  train_cmd->add_option("--features", t_features, "Precomputed features JSONL");
  train_cmd->add_option("--fused", t_fused, "Fused targets JSONL (treated as synthetic)");
  train_cmd->add_option("--out", t_out, "Model output JSON")->required();
  train_cmd->add_option("--history", t_history, "Loss history output JSONL");

  // predict
  std::string p_model, p_instances, p_features, p_out;
  CLI::App* predict = app.add_subcommand("predict", "Score instances with a trained model");
  add_common(predict, common);
  predict->add_option("--model", p_model, "Model JSON")->required();
  predict->add_option("--instances", p_instances, "Instances JSONL")->required();
  predict->add_option("--features", p_features, "Precomputed features JSONL");
  predict->add_option("--out", p_out, "Predictions output JSONL")->required();

  // eval
  std::string e_pred, e_gold, e_out;
  CLI::App* eval = app.add_subcommand("eval", "Evaluate predictions against gold instances");
  add_common(eval, common);
  eval->add_option("--pred", e_pred, "Predictions JSONL")->required();
  eval->add_option("--gold", e_gold, "Gold instances JSONL")->required();
  eval->add_option("--out", e_out, "Report file (default stdout)");

  // trace-score
  std::string ts_maieutic, ts_bird, ts_scorer, ts_model, ts_out;
  CLI::App* trace = app.add_subcommand("trace-score", "Score structured reasoning traces");
  add_common(trace, common);
  trace->add_option("--maieutic", ts_maieutic, "Maieutic graphs JSONL");
  trace->add_option("--bird", ts_bird, "Two-stage traces JSONL");
  trace->add_option("--scorer", ts_scorer, "Table scorer JSONL");
  trace->add_option("--model", ts_model, "Model JSON used as the scorer");
  trace->add_option("--out", ts_out, "Scored traces output JSONL")->required();

  // gradcheck
  std::size_t g_trials = 100;
  std::string g_out;
  CLI::App* gradcheck = app.add_subcommand("gradcheck", "Check analytic gradients with finite differences");
  add_common(gradcheck, common);
  gradcheck->add_option("--trials", g_trials, "Random points per loss (default 100)");
  gradcheck->add_option("--out", g_out, "Report file (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (quantize->parsed()) return cmd_quantize(common, q_y, q_sigma, q_bins, q_out);
    if (fuse->parsed()) return cmd_fuse(common, f_rollouts, f_out);
    if (rank->parsed()) return cmd_rank(common, r_items, r_comparisons, r_out, r_log);
    if (train_cmd->parsed()) {
      return cmd_train(common, t_instances, t_pairwise, t_features, t_fused, t_out,
                       t_history);
    }
    if (predict->parsed()) return cmd_predict(common, p_model, p_instances, p_features, p_out);
    if (eval->parsed()) return cmd_eval(common, e_pred, e_gold, e_out);
    if (trace->parsed()) {
      return cmd_trace_score(common, ts_maieutic, ts_bird, ts_scorer, ts_model, ts_out);
    }
    if (gradcheck->parsed()) return cmd_gradcheck(common, g_trials, g_out);
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace odds::cli
