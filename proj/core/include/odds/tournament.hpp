#pragma once

// Seeded comparison tournament: repeatedly pairs items inside their coarse
// bins, applies rating updates, and logs every comparison for replay.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "odds/rating.hpp"

namespace odds {

struct TournamentItem {
  std::string id;
  double direct_score = 0.0;  // in [0,1]; drives coarse-bin assignment
};

// Must be deterministic for a given ordered pair of ids.
using Comparator = std::function<Outcome(const std::string& a_id, const std::string& b_id)>;

struct ComparisonRecord {
  std::string a_id, b_id;
  Outcome outcome = Outcome::draw;
  std::size_t step = 0;
};

struct TournamentResult {
  std::vector<std::string> ids;      // item order as given
  std::vector<SkillRating> ratings;  // parallel to ids
  std::vector<ComparisonRecord> log;
  bool reached_budget = false;   // stopped on max_comparisons, not convergence
  bool uninformative = false;    // comparisons happened but none was decisive
};

// Runs until every pairable item's sigma falls to stop_sigma or the
// comparison budget runs out (flagged, not an error). Items alone in their
// coarse bin cannot be compared and keep their initial rating.
TournamentResult run_tournament(const std::vector<TournamentItem>& items,
                                const Comparator& comparator,
                                const TournamentConfig& config);

// Re-applies a comparison log over freshly initialized ratings; reproduces
// the final ratings of the run that emitted the log.
std::vector<SkillRating> replay_comparisons(const std::vector<TournamentItem>& items,
                                            const std::vector<ComparisonRecord>& log,
                                            const TournamentConfig& config);

}  // namespace odds
