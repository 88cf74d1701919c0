#include "odds/tournament.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "odds/errors.hpp"
#include "odds/random.hpp"

namespace odds {
namespace {

std::vector<SkillRating> initial_ratings(const std::vector<TournamentItem>& items,
                                         const TournamentConfig& config, Rng& rng) {
  std::vector<SkillRating> ratings(items.size());
  for (SkillRating& r : ratings) {
    r.mu = uniform_in(rng, config.init_mu_lo, config.init_mu_hi);
    r.sigma = config.init_sigma;
  }
  return ratings;
}

void check_items(const std::vector<TournamentItem>& items) {
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!seen.emplace(items[i].id, i).second) {
      throw ValidationError("duplicate tournament item id '" + items[i].id + "'");
    }
  }
}

}  // namespace

TournamentResult run_tournament(const std::vector<TournamentItem>& items,
                                const Comparator& comparator,
                                const TournamentConfig& config) {
  validate_config(config);
  check_items(items);

  TournamentResult result;
  result.ids.reserve(items.size());
  std::vector<double> scores;
  scores.reserve(items.size());
  for (const TournamentItem& item : items) {
    result.ids.push_back(item.id);
    scores.push_back(item.direct_score);
  }

  Rng rng = stream_rng(config.seed, 0);
  result.ratings = initial_ratings(items, config, rng);

  const std::vector<std::size_t> bins = assign_coarse_bins(scores, config.coarse_bins);
  std::vector<std::vector<std::size_t>> groups(config.coarse_bins);
  for (std::size_t i = 0; i < items.size(); ++i) groups[bins[i]].push_back(i);

  // Items alone in their bin have no legal partner and never converge.
  std::vector<bool> pairable(items.size(), false);
  for (std::size_t i = 0; i < items.size(); ++i) {
    pairable[i] = groups[bins[i]].size() >= 2;
  }

  auto active_items = [&] {
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (pairable[i] && result.ratings[i].sigma > config.stop_sigma) {
        active.push_back(i);
      }
    }
    return active;
  };

  bool any_decisive = false;
  std::size_t step = 0;
  while (step < config.max_comparisons) {
    const std::vector<std::size_t> active = active_items();
    if (active.empty()) break;

    std::size_t a_idx;
    if (config.scheduling == PairScheduling::highest_sigma_first) {
      a_idx = active[0];
      for (std::size_t i : active) {
        if (result.ratings[i].sigma > result.ratings[a_idx].sigma) a_idx = i;
      }
    } else {
      a_idx = active[below(rng, active.size())];
    }

    const std::vector<std::size_t>& group = groups[bins[a_idx]];
    std::size_t b_idx = a_idx;
    while (b_idx == a_idx) {
      b_idx = group[below(rng, group.size())];
    }

    const Outcome outcome = comparator(items[a_idx].id, items[b_idx].id);
    if (outcome != Outcome::draw) any_decisive = true;
    const auto [na, nb] =
        update_ratings(result.ratings[a_idx], result.ratings[b_idx], outcome, config);
    result.ratings[a_idx] = na;
    result.ratings[b_idx] = nb;
    result.log.push_back({items[a_idx].id, items[b_idx].id, outcome, step});
    ++step;
  }

  result.reached_budget = !active_items().empty();
  result.uninformative = !result.log.empty() && !any_decisive;
  return result;
}

std::vector<SkillRating> replay_comparisons(const std::vector<TournamentItem>& items,
                                            const std::vector<ComparisonRecord>& log,
                                            const TournamentConfig& config) {
  validate_config(config);
  check_items(items);
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < items.size(); ++i) index[items[i].id] = i;

  Rng rng = stream_rng(config.seed, 0);
  std::vector<SkillRating> ratings = initial_ratings(items, config, rng);
  for (const ComparisonRecord& rec : log) {
    const auto a_it = index.find(rec.a_id);
    const auto b_it = index.find(rec.b_id);
    if (a_it == index.end() || b_it == index.end()) {
      throw ValidationError("comparison log references unknown item '" +
                            (a_it == index.end() ? rec.a_id : rec.b_id) + "'");
    }
    const auto [na, nb] =
        update_ratings(ratings[a_it->second], ratings[b_it->second], rec.outcome, config);
    ratings[a_it->second] = na;
    ratings[b_it->second] = nb;
  }
  return ratings;
}

}  // namespace odds
