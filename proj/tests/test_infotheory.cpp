#include <doctest.h>

#include <cmath>

#include "mixreg/error.hpp"
#include "mixreg/infotheory.hpp"
#include "mixreg/predictor.hpp"
#include "oracles.hpp"

using namespace mixreg;

TEST_CASE("binary_entropy") {
  CHECK(binary_entropy(0.5) == 1.0);
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  // 2 - (3/4) log2 3
  CHECK(binary_entropy(0.75) == doctest::Approx(2.0 - 0.75 * std::log2(3.0)).epsilon(1e-15));
  CHECK(binary_entropy(0.75) == doctest::Approx(0.8112781244591328).epsilon(1e-15));
  for (double p : {0.01, 0.2, 0.37, 0.49}) CHECK(binary_entropy(p) == doctest::Approx(binary_entropy(1 - p)));
  CHECK_THROWS_AS(binary_entropy(-0.01), Error);
  CHECK_THROWS_AS(binary_entropy(NAN), Error);
}

TEST_CASE("mixture_entropy") {
  CHECK(mixture_entropy(0.0) == 1.0);
  CHECK(mixture_entropy(1.0) == 0.0);
  CHECK(mixture_entropy(0.5) == doctest::Approx(binary_entropy(0.75)).epsilon(1e-15));
  CHECK_THROWS_AS(mixture_entropy(1.5), Error);
}

TEST_CASE("mixture entropy strictly decreasing; derivative matches closed form") {
  double prev = mixture_entropy(0.0);
  const double h = 1e-6;
  for (int i = 1; i < 1000; ++i) {
    const double pi = i / 1000.0;
    const double v = mixture_entropy(pi);
    CHECK(v < prev);
    prev = v;
    const double fd = (mixture_entropy(pi + h) - mixture_entropy(pi - h)) / (2 * h);
    CHECK(std::fabs(fd - 0.5 * std::log2((1 - pi) / (1 + pi))) <= 1e-6);
  }
}

TEST_CASE("sufficiency_gap") {
  CHECK(sufficiency_gap(0.0).gap == 0.0);
  CHECK(sufficiency_gap(0.5).gap == doctest::Approx(0.18872187554086717).epsilon(1e-14));
  CHECK(sufficiency_gap(1.0).gap == 1.0);
  CHECK(sufficiency_gap(1.0 - 1e-9).gap == doctest::Approx(1.0).epsilon(1e-6));
  for (int i = 1; i <= 1000; ++i) {
    const auto r = sufficiency_gap(i / 1000.0);
    CHECK(r.gap > 0.0);
    CHECK(r.gap == r.h_true_conditional - r.h_marginal);
    CHECK(r.h_true_conditional == 1.0);
    CHECK(r.h_marginal >= 0.0);
    CHECK(r.h_marginal <= 1.0);
  }
}

TEST_CASE("pointwise mutual information") {
  CHECK(pointwise_mutual_info(0.0) == 0.0);
  CHECK(pointwise_mutual_info(1.0) == 0.0);
  CHECK(pointwise_mutual_info(0.5) == doctest::Approx(0.3112781244591328).epsilon(1e-14));
  for (int i = 0; i <= 200; ++i) {
    const double pi = i / 200.0;
    const double closed = pointwise_mutual_info(pi);
    CHECK(closed >= 0.0);
    CHECK(std::fabs(closed - oracle::plain_mi(pi)) <= 1e-12);
    if (i > 0 && i < 200) CHECK(closed > 0.0);
  }
}

TEST_CASE("expected residual MI") {
  for (double pi : {0.1, 0.5, 0.9}) {
    CHECK(expected_residual_mi(pi, 0.5) == doctest::Approx(pointwise_mutual_info(pi)).epsilon(1e-13));
    CHECK(expected_residual_mi(pi, 1.0) == 0.0);
  }
  const double v = expected_residual_mi(0.9, 0.8);
  CHECK(v > 0.0);
  CHECK(v < pointwise_mutual_info(0.9));
  CHECK(std::fabs(v - oracle::conditional_mi(oracle::build_joint(0.9, 0.8))) <= 1e-12);

  // Boundaries with zero-probability signal values.
  CHECK(expected_residual_mi(0.0, 1.0) == 0.0);
  CHECK(expected_residual_mi(1.0, 1.0) == 0.0);

  for (int i = 0; i <= 40; ++i) {
    const double pi = i / 40.0;
    double prev = INFINITY;
    for (int k = 0; k <= 50; ++k) {
      const double gamma = 0.5 + 0.5 * k / 50.0;
      const double e = expected_residual_mi(pi, gamma);
      CHECK(std::fabs(e - oracle::conditional_mi(oracle::build_joint(pi, gamma))) <= 1e-12);
      CHECK(e <= pointwise_mutual_info(pi) + 1e-12);
      if (k > 0 && i > 0 && i < 40) CHECK(e < pointwise_mutual_info(pi));
      CHECK(e <= prev + 1e-15);
      prev = e;
    }
  }
}

TEST_CASE("entropy after grounding") {
  for (double pi : {0.1, 0.5, 0.9}) {
    CHECK(entropy_after_grounding(pi, 1.0) == 1.0);
    CHECK(entropy_after_grounding(pi, 0.5) == doctest::Approx(mixture_entropy(pi)).epsilon(1e-14));
  }
  // q = 0.045 / 0.14, then H2((1 + q) / 2).
  const double q = 0.045 / 0.14;
  CHECK(entropy_after_grounding(0.9, 0.95) == doctest::Approx(oracle::h2(0.5 * (1 + q))).epsilon(1e-14));
  CHECK(entropy_after_grounding(0.9, 0.95) == doctest::Approx(0.9241335419915457).epsilon(1e-12));
  CHECK_THROWS_AS(entropy_after_grounding(0.0, 0.9), Error);
  CHECK_THROWS_AS(entropy_after_grounding(1.0, 0.9), Error);

  for (int i = 1; i < 100; ++i) {
    const double pi = i / 100.0;
    CHECK(entropy_after_grounding(pi, 0.999) < 1.0);
    CHECK(entropy_after_grounding(pi, 1.0) == 1.0);
  }
}

TEST_CASE("internal entropy is the mixture entropy") {
  for (double pi : {0.0, 0.5, 1.0, 0.3}) CHECK(internal_entropy(pi) == mixture_entropy(pi));
  CHECK(internal_entropy(0.5) == doctest::Approx(0.8112781244591328).epsilon(1e-15));
  // It never sees the regime, so it cannot equal the gap the regime implies.
  for (int i = 1; i <= 100; ++i) {
    const double pi = i / 100.0;
    CHECK(internal_entropy(pi) != sufficiency_gap(pi).gap);
  }
}
