#pragma once

// Two-player Gaussian skill ratings: order-consistent outcome resolution from
// slot-alternated passes, moment-matched rating updates with a draw margin,
// coarse-bin assignment for comparison scheduling, and the softmax score map.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace odds {

struct SkillRating {
  double mu = 25.0;
  double sigma = 25.0 / 3.0;  // must stay positive
};

enum class Outcome { a_wins, b_wins, draw };

// Preference reported by one comparison pass, in terms of prompt slots.
enum class SlotPreference { first, second, none };

struct MatchResult {
  std::string a_id, b_id;
  Outcome outcome = Outcome::draw;
};

enum class PairScheduling { highest_sigma_first, pure_random };

struct TournamentConfig {
  double init_sigma = 25.0 / 3.0;
  double beta = 25.0 / 6.0;           // performance noise; default init_sigma / 2
  double draw_epsilon = 25.0 / 60.0;  // draw margin; default 0.1 * beta
  double init_mu_lo = 25.0, init_mu_hi = 25.0;
  double stop_sigma = 1.0;  // convergence threshold, < init_sigma
  std::size_t coarse_bins = 5;
  std::uint64_t seed = 42;
  std::size_t max_comparisons = 10000;
  PairScheduling scheduling = PairScheduling::highest_sigma_first;
};

void validate_config(const TournamentConfig& config);

// Preset with unit-interval initial means and a wide initial sigma, pure
// random pairing and no coarse binning. The mean/sigma scale mismatch is
// deliberate; it mirrors the reference tournament setup this module follows.
TournamentConfig unit_scale_preset();

// Two passes with the items swapped between slots: item a occupies the first
// slot on pass one and the second slot on pass two. a wins only if both
// passes prefer it; anything inconsistent is a draw.
Outcome resolve_orderings(SlotPreference first_pass, SlotPreference second_pass);

// Moment-matched update after one match. Wins move the winner's mu up and the
// loser's down; draws pull the mus together; sigma strictly decreases for
// both players in every case. Draw updates need draw_epsilon > 0.
std::pair<SkillRating, SkillRating> update_ratings(const SkillRating& a,
                                                   const SkillRating& b,
                                                   Outcome outcome,
                                                   const TournamentConfig& config);

// Equal-width bins over [0,1]; 1.0 lands in the last bin.
std::vector<std::size_t> assign_coarse_bins(const std::vector<double>& direct_scores,
                                            std::size_t m);

// Softmax over (mu_i / sigma_i) / temperature. Preserves the mu/sigma order;
// the outputs are per-group choice probabilities, not calibrated conditional
// probabilities.
std::vector<double> plackett_luce_map(const std::vector<SkillRating>& ratings,
                                      double temperature);

}  // namespace odds
