#include "odds/fusion.hpp"

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "odds/errors.hpp"
#include "odds/random.hpp"

using namespace odds;

namespace {

SyntheticAnnotationSet make_set(std::vector<double> estimates,
                                std::vector<double> confidences) {
  SyntheticAnnotationSet set;
  set.instance_id = "x";
  set.estimates = std::move(estimates);
  set.confidences = std::move(confidences);
  return set;
}

}  // namespace

TEST_CASE("discrepancy is max minus min") {
  CHECK(discrepancy({0.1, 0.2, 0.9}) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(discrepancy({0.4}) == 0.0);
  CHECK(discrepancy({0.3, 0.3, 0.3, 0.3}) == 0.0);
  CHECK_THROWS_AS(discrepancy({}), ValidationError);
}

TEST_CASE("partition_by_agreement splits stably at the threshold") {
  const std::vector<SyntheticAnnotationSet> sets = {
      make_set({0.4, 0.5}, {1, 1}),       // discrepancy 0.1
      make_set({0.2, 0.7}, {1, 1}),       // discrepancy 0.5
      make_set({0.3, 0.3, 0.3}, {1, 1}),  // discrepancy 0.0
  };
  const auto [low, high] = partition_by_agreement(sets, 0.2);
  REQUIRE(low.size() == 2);
  REQUIRE(high.size() == 1);
  CHECK(low[0].estimates == std::vector<double>{0.4, 0.5});
  CHECK(low[1].estimates == std::vector<double>{0.3, 0.3, 0.3});

  const auto all_low = partition_by_agreement(sets, 1.0);
  CHECK(all_low.first.size() == 3);
  const auto only_exact = partition_by_agreement(sets, 0.0);
  CHECK(only_exact.first.size() == 1);
}

TEST_CASE("confidence weights follow the power rule") {
  const std::vector<double> w = confidence_weights({0.9, 0.3}, 2.0);
  CHECK(w[0] == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(w[1] == doctest::Approx(0.1).epsilon(1e-12));

  for (const double alpha : {0.5, 1.0, 2.0, 7.0}) {
    const std::vector<double> eq = confidence_weights({1.0, 1.0}, alpha);
    CHECK(eq[0] == doctest::Approx(0.5).epsilon(1e-12));
  }

  const std::vector<double> uniform = confidence_weights({0.9, 0.1, 0.0}, 0.0);
  for (double v : uniform) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  CHECK_THROWS_AS(confidence_weights({0.0, 0.0}, 2.0), ValidationError);
}

TEST_CASE("fused mixture is symmetric for symmetric inputs") {
  const BinSchema schema = make_schema(10);
  FusionConfig config;
  config.alpha = 2.0;
  config.sigma = QuantizeParams{0.05};
  const BinDistribution fused =
      fuse_confidence_weighted(make_set({0.2, 0.8}, {1.0, 1.0}), config, schema);
  double sum = 0.0;
  for (std::size_t j = 0; j < 10; ++j) {
    sum += fused.probs[j];
    CHECK(fused.probs[j] == doctest::Approx(fused.probs[9 - j]).epsilon(1e-12));
  }
  CHECK(std::abs(sum - 1.0) < 1e-9);
  // Bimodal: the two component modes dominate the middle.
  CHECK(fused.probs[1] > fused.probs[4]);
  CHECK(fused.probs[8] > fused.probs[5]);
}

TEST_CASE("fusion is permutation equivariant") {
  const BinSchema schema = make_schema(20);
  FusionConfig config;
  const BinDistribution a = fuse_confidence_weighted(
      make_set({0.1, 0.5, 0.8}, {0.9, 0.2, 0.6}), config, schema);
  const BinDistribution b = fuse_confidence_weighted(
      make_set({0.8, 0.1, 0.5}, {0.6, 0.9, 0.2}), config, schema);
  for (std::size_t j = 0; j < 20; ++j) {
    CHECK(a.probs[j] == doctest::Approx(b.probs[j]).epsilon(1e-12));
  }
}

TEST_CASE("large alpha collapses the mixture onto the most confident component") {
  const BinSchema schema = make_schema(20);
  FusionConfig config;
  config.alpha = 200.0;
  const SyntheticAnnotationSet set = make_set({0.3, 0.7}, {0.9, 0.8});
  const BinDistribution fused = fuse_confidence_weighted(set, config, schema);
  const BinDistribution top = quantize_scalar(0.3, config.sigma, schema);
  double l1 = 0.0;
  for (std::size_t j = 0; j < 20; ++j) l1 += std::abs(fused.probs[j] - top.probs[j]);
  CHECK(l1 < 1e-6);
}

TEST_CASE("fused decode stays within the component range") {
  Rng rng = stream_rng(71, 0);
  const BinSchema schema = make_schema(20);
  FusionConfig config;
  config.sigma = QuantizeParams{0.03};
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 1 + below(rng, 4);
    std::vector<double> estimates, confidences;
    for (std::size_t i = 0; i < k; ++i) {
      estimates.push_back(uniform_in(rng, 0.2, 0.8));
      confidences.push_back(uniform_in(rng, 0.1, 1.0));
    }
    const BinDistribution fused =
        fuse_confidence_weighted(make_set(estimates, confidences), config, schema);
    const double decode = expected_decode(fused, schema);
    const auto [lo, hi] = std::minmax_element(estimates.begin(), estimates.end());
    const double slack = 1.0 / 40.0;  // half a bin width for N = 20
    CHECK(decode >= *lo - slack - 1e-9);
    CHECK(decode <= *hi + slack + 1e-9);
  }
}

TEST_CASE("logistic map round-trips and stays monotone") {
  const LogisticMap map;
  CHECK(map.forward(map.inverse(0.3).value) == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(map.forward(0.0) == doctest::Approx(0.5).epsilon(1e-12));

  const LogisticMap shifted{2.0, -1.0};
  CHECK(shifted.forward(-1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(shifted.forward(shifted.inverse(0.7).value) == doctest::Approx(0.7).epsilon(1e-9));

  Rng rng = stream_rng(73, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    double x = 20.0 * (uniform01(rng) - 0.5);
    double y = 20.0 * (uniform01(rng) - 0.5);
    if (x == y) continue;
    if (x > y) std::swap(x, y);
    CHECK(map.forward(x) < map.forward(y));
  }
}

TEST_CASE("logit direction clips the boundary and flags it") {
  const LogisticMap map;
  const LogisticMap::Inverse at_zero = map.inverse(0.0);
  CHECK(at_zero.clipped);
  CHECK(at_zero.value == doctest::Approx(std::log(1e-6) - std::log1p(-1e-6)).epsilon(1e-9));
  const LogisticMap::Inverse at_one = map.inverse(1.0);
  CHECK(at_one.clipped);
  CHECK(!map.inverse(0.5).clipped);
  CHECK_THROWS_AS(map.inverse(-0.1), ValidationError);
}
