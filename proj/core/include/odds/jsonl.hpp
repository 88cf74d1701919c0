#pragma once

// Strict JSONL loaders and writers. Every loader validates the full schema
// of each line (unknown keys are rejected) and attaches path:line to any
// failure; an invalid line always aborts the load. Writers emit one record
// per line with round-trip-exact numbers, preceded by an optional header
// line carrying the resolved run configuration.

#include <string>
#include <vector>

#include "odds/head.hpp"
#include "odds/records.hpp"
#include "odds/tournament.hpp"

namespace odds {

std::vector<Instance> load_instances(const std::string& path);
std::vector<PairwiseExample> load_pairwise(const std::string& path);
std::vector<RolloutRecord> load_rollouts(const std::string& path);
std::vector<FeatureRecord> load_features(const std::string& path);
std::vector<PredictionRecord> load_predictions(const std::string& path);
std::vector<RatingRecord> load_ratings(const std::string& path);
std::vector<ComparisonRecord> load_comparison_log(const std::string& path);
std::vector<ComparisonTableRecord> load_comparison_table(const std::string& path);
std::vector<FusedTargetRecord> load_fused_targets(const std::string& path);
std::vector<MaieuticGraphRecord> load_maieutic_graphs(const std::string& path);
std::vector<BirdTraceRecord> load_bird_traces(const std::string& path);
std::vector<ScorerTableRecord> load_scorer_table(const std::string& path);
std::vector<TournamentItem> load_tournament_items(const std::string& path);

// `header` is a serialized JSON object written as {"type":"header",...} on
// the first line when non-empty; loaders skip such lines.
void save_instances(const std::string& path, const std::vector<Instance>& records,
                    const std::string& header = "");
void save_pairwise(const std::string& path, const std::vector<PairwiseExample>& records,
                   const std::string& header = "");
void save_rollouts(const std::string& path, const std::vector<RolloutRecord>& records,
                   const std::string& header = "");
void save_features(const std::string& path, const std::vector<FeatureRecord>& records,
                   const std::string& header = "");
void save_predictions(const std::string& path,
                      const std::vector<PredictionRecord>& records,
                      const std::string& header = "");
void save_ratings(const std::string& path, const std::vector<RatingRecord>& records,
                  const std::string& header = "");
void save_comparison_log(const std::string& path,
                         const std::vector<ComparisonRecord>& records,
                         const std::string& header = "");
void save_comparison_table(const std::string& path,
                           const std::vector<ComparisonTableRecord>& records,
                           const std::string& header = "");
void save_fused_targets(const std::string& path,
                        const std::vector<FusedTargetRecord>& records,
                        const std::string& header = "");
void save_maieutic_graphs(const std::string& path,
                          const std::vector<MaieuticGraphRecord>& records,
                          const std::string& header = "");
void save_bird_traces(const std::string& path,
                      const std::vector<BirdTraceRecord>& records,
                      const std::string& header = "");
void save_scorer_table(const std::string& path,
                       const std::vector<ScorerTableRecord>& records,
                       const std::string& header = "");
void save_tournament_items(const std::string& path,
                           const std::vector<TournamentItem>& records,
                           const std::string& header = "");

// Trained head with its schema, as a single JSON document.
struct ModelFile {
  HeadParams head;
  std::size_t n_bins = 0;
  std::uint64_t featurizer_seed = 0;
  std::string config_json;  // resolved run configuration, serialized
};

ModelFile load_model(const std::string& path);
void save_model(const std::string& path, const ModelFile& model);

}  // namespace odds
