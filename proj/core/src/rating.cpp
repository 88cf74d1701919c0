#include "odds/rating.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "odds/errors.hpp"

namespace odds {
namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }
double norm_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

// Additive mean correction for a decisive outcome, x = t - margin.
double v_exceeds(double x) {
  const double denom = norm_cdf(x);
  if (denom < 1e-300) return -x;  // asymptote of pdf/cdf far in the tail
  return norm_pdf(x) / denom;
}

double w_exceeds(double x) {
  const double v = v_exceeds(x);
  return v * (v + x);
}

// Mean correction for an outcome within the draw margin.
double v_within(double t, double margin) {
  const double denom = norm_cdf(margin - t) - norm_cdf(-margin - t);
  if (denom < 1e-300) {
    return t < 0.0 ? -t - margin : -t + margin;
  }
  return (norm_pdf(-margin - t) - norm_pdf(margin - t)) / denom;
}

double w_within(double t, double margin) {
  const double denom = norm_cdf(margin - t) - norm_cdf(-margin - t);
  if (denom < 1e-300) return 1.0;
  const double v = v_within(t, margin);
  return v * v + ((margin - t) * norm_pdf(margin - t) +
                  (margin + t) * norm_pdf(margin + t)) /
                     denom;
}

void check_rating(const SkillRating& r) {
  if (!std::isfinite(r.mu) || !std::isfinite(r.sigma)) {
    throw NumericError("skill rating has non-finite parameters");
  }
  if (!(r.sigma > 0.0)) throw ValidationError("skill sigma must be positive");
}

}  // namespace

void validate_config(const TournamentConfig& config) {
  if (!(config.beta > 0.0)) throw ValidationError("beta must be positive");
  if (!(config.draw_epsilon >= 0.0)) {
    throw ValidationError("draw_epsilon must be non-negative");
  }
  if (!(config.init_sigma > 0.0)) throw ValidationError("init_sigma must be positive");
  if (!(config.stop_sigma > 0.0 && config.stop_sigma < config.init_sigma)) {
    throw ValidationError("stop_sigma must lie in (0, init_sigma)");
  }
  if (!(config.init_mu_lo <= config.init_mu_hi)) {
    throw ValidationError("init mu range is inverted");
  }
  if (config.coarse_bins < 1) throw ValidationError("coarse_bins must be at least 1");
}

TournamentConfig unit_scale_preset() {
  TournamentConfig config;
  config.init_mu_lo = 0.0;
  config.init_mu_hi = 1.0;
  config.init_sigma = 3.0;
  config.beta = config.init_sigma / 2.0;
  config.draw_epsilon = 0.1 * config.beta;
  config.stop_sigma = 0.3;
  config.coarse_bins = 1;
  config.seed = 42;
  config.scheduling = PairScheduling::pure_random;
  return config;
}

Outcome resolve_orderings(SlotPreference first_pass, SlotPreference second_pass) {
  // Pass two swaps the slots, so a consistent preference for item a shows up
  // as (first, second) and for item b as (second, first).
  if (first_pass == SlotPreference::first && second_pass == SlotPreference::second) {
    return Outcome::a_wins;
  }
  if (first_pass == SlotPreference::second && second_pass == SlotPreference::first) {
    return Outcome::b_wins;
  }
  return Outcome::draw;
}

std::pair<SkillRating, SkillRating> update_ratings(const SkillRating& a,
                                                   const SkillRating& b,
                                                   Outcome outcome,
                                                   const TournamentConfig& config) {
  check_rating(a);
  check_rating(b);
  if (!(config.beta > 0.0)) throw ValidationError("beta must be positive");

  const double var_a = a.sigma * a.sigma;
  const double var_b = b.sigma * b.sigma;
  const double c2 = var_a + var_b + 2.0 * config.beta * config.beta;
  const double c = std::sqrt(c2);
  const double margin = config.draw_epsilon / c;

  SkillRating na = a;
  SkillRating nb = b;
  if (outcome == Outcome::draw) {
    if (!(config.draw_epsilon > 0.0)) {
      throw ValidationError("processing a draw requires draw_epsilon > 0");
    }
    const double t = (a.mu - b.mu) / c;
    const double v = v_within(t, margin);
    const double w = w_within(t, margin);
    na.mu = a.mu + (var_a / c) * v;
    nb.mu = b.mu + (var_b / c) * v_within(-t, margin);
    na.sigma = std::sqrt(var_a * (1.0 - (var_a / c2) * w));
    nb.sigma = std::sqrt(var_b * (1.0 - (var_b / c2) * w_within(-t, margin)));
    return {na, nb};
  }

  const bool a_won = outcome == Outcome::a_wins;
  const SkillRating& winner = a_won ? a : b;
  const SkillRating& loser = a_won ? b : a;
  const double var_w = winner.sigma * winner.sigma;
  const double var_l = loser.sigma * loser.sigma;
  const double t = (winner.mu - loser.mu) / c;
  const double v = v_exceeds(t - margin);
  const double w = w_exceeds(t - margin);

  SkillRating nw, nl;
  nw.mu = winner.mu + (var_w / c) * v;
  nl.mu = loser.mu - (var_l / c) * v;
  nw.sigma = std::sqrt(var_w * (1.0 - (var_w / c2) * w));
  nl.sigma = std::sqrt(var_l * (1.0 - (var_l / c2) * w));
  if (a_won) return {nw, nl};
  return {nl, nw};
}

std::vector<std::size_t> assign_coarse_bins(const std::vector<double>& direct_scores,
                                            std::size_t m) {
  if (m < 1) throw ValidationError("coarse bin count must be at least 1");
  std::vector<std::size_t> bins(direct_scores.size());
  for (std::size_t i = 0; i < direct_scores.size(); ++i) {
    const double s = direct_scores[i];
    if (!(s >= 0.0 && s <= 1.0)) {
      throw ValidationError("direct score outside [0,1] at index " + std::to_string(i));
    }
    bins[i] = std::min(static_cast<std::size_t>(s * static_cast<double>(m)), m - 1);
  }
  return bins;
}

std::vector<double> plackett_luce_map(const std::vector<SkillRating>& ratings,
                                      double temperature) {
  if (!(temperature > 0.0)) throw ValidationError("temperature must be positive");
  if (ratings.empty()) return {};
  std::vector<double> scores(ratings.size());
  for (std::size_t i = 0; i < ratings.size(); ++i) {
    check_rating(ratings[i]);
    scores[i] = ratings[i].mu / ratings[i].sigma / temperature;
  }
  const double max_score = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double& s : scores) {
    s = std::exp(s - max_score);
    sum += s;
  }
  for (double& s : scores) s /= sum;
  return scores;
}

}  // namespace odds
