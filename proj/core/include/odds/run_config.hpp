#pragma once

// One bag of tunables for the whole pipeline, loadable from a JSON file and
// echoed (resolved) into every output header.

#include <cstddef>
#include <cstdint>
#include <string>

#include "odds/fusion.hpp"
#include "odds/rating.hpp"
#include "odds/train.hpp"

namespace odds {

struct RunConfig {
  // bins and quantization
  std::size_t n_bins = 20;
  double sigma = 0.05;

  // training objective
  double beta1 = 1.0;
  double beta2 = 10.0;
  double margin_delta = 0.1;
  double learning_rate = 0.5;
  double momentum = 0.0;
  std::size_t steps = 200;
  std::size_t upsample_human = 1;
  std::size_t upsample_synthetic = 1;
  std::size_t upsample_pairwise = 1;

  // featurization
  std::size_t feature_dim = 64;

  // annotation fusion
  double alpha = 2.0;
  double discrepancy_threshold = 0.2;

  // scalar-label transform (inverse logistic applied to scalar targets)
  bool unli_invert = false;
  double unli_scale = 1.0;
  double unli_offset = 0.0;

  // tournament; beta and draw_epsilon below zero mean "derive the default"
  // (init_sigma / 2 and 0.1 * beta respectively)
  double init_mu_lo = 25.0;
  double init_mu_hi = 25.0;
  double init_sigma = 25.0 / 3.0;
  double ts_beta = -1.0;
  double ts_draw_epsilon = -1.0;
  double stop_sigma = 1.0;
  std::size_t coarse_bins = 5;
  std::size_t max_comparisons = 10000;
  std::string pair_scheduling = "highest-sigma";  // or "random"
  double pl_temperature = 1.0;

  // metrics
  std::size_t ece_bins = 10;

  // global seed; the ODDS_SEED environment variable overrides it
  std::uint64_t seed = 42;
};

// Fills derived defaults (ts_beta, ts_draw_epsilon) and validates ranges.
RunConfig resolve(RunConfig config);

// Strict parse of a JSON object file; unknown keys are errors.
RunConfig load_run_config(const std::string& path);

// Resolved config as a canonical JSON object string.
std::string to_json(const RunConfig& config);

TrainConfig train_config(const RunConfig& config);
FusionConfig fusion_config(const RunConfig& config);
TournamentConfig tournament_config(const RunConfig& config);
LogisticMap unli_map(const RunConfig& config);

// Applies the unit-scale tournament preset fields onto a config.
RunConfig with_unit_scale_preset(RunConfig config);

}  // namespace odds
