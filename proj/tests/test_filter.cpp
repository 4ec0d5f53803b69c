#include <doctest.h>

#include <cmath>
#include <vector>

#include "mixreg/error.hpp"
#include "mixreg/filter.hpp"
#include "oracles.hpp"

using namespace mixreg;

namespace {

std::vector<Token> bits(std::initializer_list<int> v) {
  std::vector<Token> out;
  for (int b : v) out.push_back(static_cast<Token>(b));
  return out;
}

}  // namespace

TEST_CASE("filter_init") {
  CHECK(filter_init(ModelParams(0.9, 0.5)).pi0 == 0.5);
  CHECK(filter_init(ModelParams(0.9, 0.0)).pi0 == 0.0);
  CHECK(filter_init(ModelParams(0.9, 1.0)).pi0 == 1.0);
  CHECK(filter_init(ModelParams(0.9, 0.5)).position == 1);
}

TEST_CASE("filter_step examples") {
  const ModelParams params(0.9, 0.5);
  // g(0) = 2/3 after an alternating token; 2/3 * 0.9 + 1/3 * 0.1 = 19/30.
  const auto s = filter_step({0.5, 1}, 0, 1, params);
  CHECK(s.pi0 == doctest::Approx(19.0 / 30.0).epsilon(1e-15));
  CHECK(s.position == 2);

  for (double p : {0.0, 0.2, 0.5, 0.999}) {
    CHECK(filter_step({p, 1}, 1, 1, params).pi0 == doctest::Approx(0.1).epsilon(1e-15));
  }
  CHECK(filter_step({0.0, 3}, 0, 1, params).pi0 == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("filter_step impossible observation") {
  const ModelParams params(0.9, 1.0);
  try {
    filter_step({1.0, 4}, 0, 0, params);
    FAIL("expected impossible observation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::impossible_observation);
    CHECK(e.position() == std::optional<std::size_t>(5));
  }
}

TEST_CASE("filter_prefix") {
  const ModelParams params(0.9, 0.5);
  const auto one = filter_prefix(params, bits({0}));
  REQUIRE(one.size() == 1);
  CHECK(one[0].pi0 == 0.5);

  const auto alt = filter_prefix(params, bits({0, 1, 0, 1}));
  REQUIRE(alt.size() == 4);
  CHECK(std::fabs(alt.back().pi0 - brute_force_posterior(params, bits({0, 1, 0, 1})).pi0) <= 1e-12);

  CHECK(filter_prefix(params, bits({0, 0})).back().pi0 == doctest::Approx(0.1).epsilon(1e-15));
  CHECK_THROWS_AS(filter_prefix(params, std::vector<Token>{}), Error);

  try {
    filter_prefix(ModelParams(0.9, 1.0), bits({1, 1, 0}));
    FAIL("expected impossible observation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::impossible_observation);
    CHECK(e.position() == std::optional<std::size_t>(2));
  }
}

TEST_CASE("brute_force_posterior") {
  const ModelParams params(0.9, 0.5);
  CHECK(brute_force_posterior(params, bits({0, 1})).pi0 ==
        doctest::Approx(19.0 / 30.0).epsilon(1e-15));
  CHECK(brute_force_posterior(params, bits({1})).pi0 == 0.5);

  // pi_init = 0: every path starting in the alternating regime has zero
  // weight; only transitions bring mass back.
  const ModelParams none(0.9, 0.0);
  CHECK(brute_force_posterior(none, bits({0, 1})).pi0 == doctest::Approx(0.1).epsilon(1e-15));

  // Hand enumeration for [0,1,0] at rho = 0.9, pi_init = 0.5: paths (z2,z3)
  // weights 00: .5*1*.9*1 = .45, 01: .5*1*.1*.5 = .025, 10: .5*.5*.1*1 = .025,
  // 11: .5*.5*.9*.5 = .1125. P(z4=0) = (.45*.9+.025*.1+.025*.9+.1125*.1)/.6125.
  const double expected = (0.45 * 0.9 + 0.025 * 0.1 + 0.025 * 0.9 + 0.1125 * 0.1) / 0.6125;
  CHECK(brute_force_posterior(params, bits({0, 1, 0})).pi0 ==
        doctest::Approx(expected).epsilon(1e-14));

  std::vector<Token> too_long(21, 0);
  for (std::size_t i = 0; i < too_long.size(); ++i) too_long[i] = static_cast<Token>(i & 1U);
  try {
    brute_force_posterior(params, too_long);
    FAIL("expected size error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::size);
  }
  too_long.pop_back();
  CHECK_NOTHROW(brute_force_posterior(params, too_long));
}

TEST_CASE("oracle equivalence on all short prefixes") {
  const double rhos[] = {0.6, 0.75, 0.9, 0.99};
  const double pis[] = {0.1, 0.5, 0.9};
  const auto r = oracle_check(10, rhos, pis);
  CHECK(r.prefixes_compared == 12 * (2046));
  CHECK(r.max_deviation <= 1e-12);

  const auto one = oracle_check(1, rhos, pis);
  CHECK(one.max_deviation == 0.0);
  CHECK_THROWS_AS(oracle_check(21, rhos, pis), Error);
  CHECK_THROWS_AS(oracle_check(0, rhos, pis), Error);
}

TEST_CASE("oracle agrees on impossibility at pi_init = 1") {
  const double rhos[] = {0.9};
  const double pis[] = {1.0};
  CHECK(oracle_check(8, rhos, pis).max_deviation <= 1e-12);
}

TEST_CASE("alternating prefixes keep positive weight and accumulate") {
  for (double rho : {0.6, 0.75, 0.9, 0.99}) {
    for (double pi_init : {0.01, 0.1, 0.5, 0.9}) {
      const ModelParams params(rho, pi_init);
      std::vector<Token> tokens(400);
      for (std::size_t i = 0; i < tokens.size(); ++i) tokens[i] = static_cast<Token>(i & 1U);
      const auto states = filter_prefix(params, tokens);

      // Fixed point of pi -> (1 - rho) + (2 rho - 1) * 2 pi / (1 + pi).
      const double b = 1.0 - (1.0 - rho) - 2.0 * (2.0 * rho - 1.0);
      const double fixed = (-b + std::sqrt(b * b + 4.0 * (1.0 - rho))) / 2.0;

      for (std::size_t i = 0; i < states.size(); ++i) {
        REQUIRE(states[i].pi0 > 0.0);
        if (i == 0) continue;
        const double prev = states[i - 1].pi0;
        // Strictly moves toward the fixed point, monotone from below.
        if (prev < fixed - 1e-12) {
          CHECK(states[i].pi0 > prev);
          CHECK(states[i].pi0 <= fixed + 1e-12);
        }
      }
      CHECK(states.back().pi0 == doctest::Approx(fixed).epsilon(1e-9));
    }
  }
}

TEST_CASE("random prefixes: filter in [0,1] and equal to enumeration") {
  oracle::Gen gen(5);
  for (int trial = 0; trial < 300; ++trial) {
    const ModelParams params(gen.uniform(0.501, 0.999), gen.uniform(0.0, 1.0));
    const std::size_t n = 1 + static_cast<std::size_t>(gen.u64() % 16);
    std::vector<Token> tokens(n);
    for (auto& t : tokens) t = static_cast<Token>(gen.bit());
    const auto states = filter_prefix(params, tokens);
    for (const auto& s : states) {
      REQUIRE(s.pi0 >= 0.0);
      REQUIRE(s.pi0 <= 1.0);
    }
    CHECK(std::fabs(states.back().pi0 - brute_force_posterior(params, tokens).pi0) <= 1e-12);
  }
}
