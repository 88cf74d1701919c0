#include "odds/run_config.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "odds/errors.hpp"

namespace odds {
namespace {

using nlohmann::json;

}  // namespace

RunConfig resolve(RunConfig config) {
  if (config.ts_beta < 0.0) config.ts_beta = config.init_sigma / 2.0;
  if (config.ts_draw_epsilon < 0.0) config.ts_draw_epsilon = 0.1 * config.ts_beta;
  if (config.n_bins < 2) throw ValidationError("n_bins must be at least 2");
  if (!(config.sigma > 0.0)) throw ValidationError("sigma must be positive");
  if (!(config.alpha >= 0.0)) throw ValidationError("alpha must be non-negative");
  if (!(config.discrepancy_threshold >= 0.0 && config.discrepancy_threshold <= 1.0)) {
    throw ValidationError("discrepancy_threshold must lie in [0,1]");
  }
  if (config.feature_dim < 8) throw ValidationError("feature_dim must be at least 8");
  if (!(config.unli_scale > 0.0)) throw ValidationError("unli_scale must be positive");
  if (!(config.pl_temperature > 0.0)) {
    throw ValidationError("pl_temperature must be positive");
  }
  if (config.ece_bins < 1) throw ValidationError("ece_bins must be at least 1");
  if (config.pair_scheduling != "highest-sigma" && config.pair_scheduling != "random") {
    throw ValidationError("pair_scheduling must be 'highest-sigma' or 'random'");
  }
  validate_config(train_config(config));
  validate_config(tournament_config(config));
  return config;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  json obj;
  try {
    in >> obj;
  } catch (const json::exception& e) {
    throw ValidationError(path + ": parse error: " + e.what());
  }
  if (!obj.is_object()) throw ValidationError(path + ": expected a JSON object");

  RunConfig config;
  const auto get = [&](const char* key, auto& field) {
    const auto it = obj.find(key);
    if (it == obj.end()) return;
    try {
      field = it->get<std::decay_t<decltype(field)>>();
    } catch (const json::exception&) {
      throw ValidationError(std::string(path) + ": field '" + key + "' has the wrong type");
    }
    obj.erase(it);
  };
  get("n_bins", config.n_bins);
  get("sigma", config.sigma);
  get("beta1", config.beta1);
  get("beta2", config.beta2);
  get("margin_delta", config.margin_delta);
  get("learning_rate", config.learning_rate);
  get("momentum", config.momentum);
  get("steps", config.steps);
  get("upsample_human", config.upsample_human);
  get("upsample_synthetic", config.upsample_synthetic);
  get("upsample_pairwise", config.upsample_pairwise);
  get("feature_dim", config.feature_dim);
  get("alpha", config.alpha);
  get("discrepancy_threshold", config.discrepancy_threshold);
  get("unli_invert", config.unli_invert);
  get("unli_scale", config.unli_scale);
  get("unli_offset", config.unli_offset);
  get("init_mu_lo", config.init_mu_lo);
  get("init_mu_hi", config.init_mu_hi);
  get("init_sigma", config.init_sigma);
  get("ts_beta", config.ts_beta);
  get("ts_draw_epsilon", config.ts_draw_epsilon);
  get("stop_sigma", config.stop_sigma);
  get("coarse_bins", config.coarse_bins);
  get("max_comparisons", config.max_comparisons);
  get("pair_scheduling", config.pair_scheduling);
  get("pl_temperature", config.pl_temperature);
  get("ece_bins", config.ece_bins);
  get("seed", config.seed);
  if (!obj.empty()) {
    throw ValidationError(path + ": unknown field '" + obj.begin().key() + "'");
  }
  return resolve(config);
}

std::string to_json(const RunConfig& config) {
  const json obj{{"n_bins", config.n_bins},
                 {"sigma", config.sigma},
                 {"beta1", config.beta1},
                 {"beta2", config.beta2},
                 {"margin_delta", config.margin_delta},
                 {"learning_rate", config.learning_rate},
                 {"momentum", config.momentum},
                 {"steps", config.steps},
                 {"upsample_human", config.upsample_human},
                 {"upsample_synthetic", config.upsample_synthetic},
                 {"upsample_pairwise", config.upsample_pairwise},
                 {"feature_dim", config.feature_dim},
                 {"alpha", config.alpha},
                 {"discrepancy_threshold", config.discrepancy_threshold},
                 {"unli_invert", config.unli_invert},
                 {"unli_scale", config.unli_scale},
                 {"unli_offset", config.unli_offset},
                 {"init_mu_lo", config.init_mu_lo},
                 {"init_mu_hi", config.init_mu_hi},
                 {"init_sigma", config.init_sigma},
                 {"ts_beta", config.ts_beta},
                 {"ts_draw_epsilon", config.ts_draw_epsilon},
                 {"stop_sigma", config.stop_sigma},
                 {"coarse_bins", config.coarse_bins},
                 {"max_comparisons", config.max_comparisons},
                 {"pair_scheduling", config.pair_scheduling},
                 {"pl_temperature", config.pl_temperature},
                 {"ece_bins", config.ece_bins},
                 {"seed", config.seed}};
  return obj.dump();
}

TrainConfig train_config(const RunConfig& config) {
  TrainConfig out;
  out.beta1 = config.beta1;
  out.beta2 = config.beta2;
  out.margin_delta = config.margin_delta;
  out.sigma = QuantizeParams{config.sigma};
  out.learning_rate = config.learning_rate;
  out.momentum = config.momentum;
  out.steps = config.steps;
  out.seed = config.seed;
  out.upsample_human = config.upsample_human;
  out.upsample_synthetic = config.upsample_synthetic;
  out.upsample_pairwise = config.upsample_pairwise;
  return out;
}

FusionConfig fusion_config(const RunConfig& config) {
  FusionConfig out;
  out.alpha = config.alpha;
  out.discrepancy_threshold = config.discrepancy_threshold;
  out.sigma = QuantizeParams{config.sigma};
  return out;
}

TournamentConfig tournament_config(const RunConfig& config) {
  TournamentConfig out;
  out.init_sigma = config.init_sigma;
  out.beta = config.ts_beta >= 0.0 ? config.ts_beta : config.init_sigma / 2.0;
  out.draw_epsilon =
      config.ts_draw_epsilon >= 0.0 ? config.ts_draw_epsilon : 0.1 * out.beta;
  out.init_mu_lo = config.init_mu_lo;
  out.init_mu_hi = config.init_mu_hi;
  out.stop_sigma = config.stop_sigma;
  out.coarse_bins = config.coarse_bins;
  out.seed = config.seed;
  out.max_comparisons = config.max_comparisons;
  out.scheduling = config.pair_scheduling == "random"
                       ? PairScheduling::pure_random
                       : PairScheduling::highest_sigma_first;
  return out;
}

LogisticMap unli_map(const RunConfig& config) {
  return LogisticMap{config.unli_scale, config.unli_offset};
}

RunConfig with_unit_scale_preset(RunConfig config) {
  const TournamentConfig preset = unit_scale_preset();
  config.init_mu_lo = preset.init_mu_lo;
  config.init_mu_hi = preset.init_mu_hi;
  config.init_sigma = preset.init_sigma;
  config.ts_beta = preset.beta;
  config.ts_draw_epsilon = preset.draw_epsilon;
  config.stop_sigma = preset.stop_sigma;
  config.coarse_bins = preset.coarse_bins;
  config.pair_scheduling = "random";
  return config;
}

}  // namespace odds
