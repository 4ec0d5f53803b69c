#include <doctest.h>

#include <cmath>

#include "mixreg/error.hpp"
#include "mixreg/process.hpp"

using namespace mixreg;

TEST_CASE("ModelParams rejects out-of-range values instead of clamping") {
  CHECK_NOTHROW(ModelParams(0.9, 0.5, 0.9));
  CHECK_NOTHROW(ModelParams(0.51, 0.0, 0.5));
  CHECK_NOTHROW(ModelParams(0.99, 1.0, 1.0));
  for (double rho : {0.5, 1.0, 0.3, 1.2, double(NAN)}) {
    CHECK_THROWS_AS(ModelParams(rho, 0.5, 0.9), Error);
  }
  CHECK_THROWS_AS(ModelParams(0.9, -0.01, 0.9), Error);
  CHECK_THROWS_AS(ModelParams(0.9, 1.01, 0.9), Error);
  CHECK_THROWS_AS(ModelParams(0.9, 0.5, 0.49), Error);
  CHECK_THROWS_AS(ModelParams(0.9, 0.5, 1.0001), Error);
  try {
    ModelParams(0.4, 0.5, 0.9);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::parameter);
  }
}

TEST_CASE("transition_matrix") {
  const auto m = transition_matrix(0.9);
  CHECK(m[0][0] == 0.9);
  CHECK(m[1][1] == 0.9);
  CHECK(m[0][1] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(m[1][0] == doctest::Approx(0.1).epsilon(1e-15));

  const auto q = transition_matrix(0.75);
  CHECK(q[0][0] == 0.75);
  CHECK(q[0][1] == 0.25);

  for (double rho : {0.51, 0.6, 0.75, 0.9, 0.99, 0.999}) {
    const auto t = transition_matrix(rho);
    CHECK(t[0][0] + t[0][1] == 1.0);
    CHECK(t[1][0] + t[1][1] == 1.0);
  }
  CHECK_THROWS_AS(transition_matrix(0.5), Error);
  CHECK_THROWS_AS(transition_matrix(1.0), Error);
}

TEST_CASE("emission_prob") {
  CHECK(emission_prob(Regime::alternating, 0, 1) == 1.0);
  CHECK(emission_prob(Regime::alternating, 1, 0) == 1.0);
  CHECK(emission_prob(Regime::alternating, 0, 0) == 0.0);
  CHECK(emission_prob(Regime::alternating, 1, 1) == 0.0);
  for (Token prev : {0, 1}) {
    for (Token tok : {0, 1}) CHECK(emission_prob(Regime::random, prev, tok) == 0.5);
  }
}

TEST_CASE("sample_trajectory shape and determinism") {
  const ModelParams params(0.9, 0.5, 0.8);
  CHECK_THROWS_AS(sample_trajectory(params, 1, 7, false), Error);
  CHECK_THROWS_AS(sample_trajectory(params, 0, 7, false), Error);

  const auto a = sample_trajectory(params, 500, 42, true);
  const auto b = sample_trajectory(params, 500, 42, true);
  CHECK(a == b);
  CHECK(a.tokens.size() == 500);
  CHECK(a.regimes.size() == 499);
  REQUIRE(a.signals.has_value());
  CHECK(a.signals->size() == 499);
  CHECK(a.seed == 42);

  const auto c = sample_trajectory(params, 500, 43, true);
  CHECK(a.tokens != c.tokens);

  // Tokens and regimes are unaffected by whether signals are kept and by gamma.
  const auto plain = sample_trajectory(params, 500, 42, false);
  CHECK_FALSE(plain.signals.has_value());
  CHECK(plain.tokens == a.tokens);
  CHECK(plain.regimes == a.regimes);
  const auto other_gamma = sample_trajectory(params.with_gamma(0.55), 500, 42, true);
  CHECK(other_gamma.tokens == a.tokens);
}

TEST_CASE("alternation is never violated under the alternating regime") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const ModelParams params(0.6 + 0.39 * static_cast<double>(seed % 7) / 6.0,
                             static_cast<double>(seed % 5) / 4.0, 0.5);
    const auto t = sample_trajectory(params, 300, seed, false);
    for (std::size_t i = 0; i < t.regimes.size(); ++i) {
      if (t.regimes[i] == Regime::alternating) REQUIRE(t.tokens[i + 1] == 1 - t.tokens[i]);
    }
  }
}

TEST_CASE("perfect oracle reports the regime exactly") {
  const auto t = sample_trajectory(ModelParams(0.8, 0.5, 1.0), 2000, 3, true);
  CHECK(*t.signals == t.regimes);
}

TEST_CASE("first governed regime follows pi_init at the boundaries") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    CHECK(sample_trajectory(ModelParams(0.9, 1.0), 2, seed, false).regimes[0] ==
          Regime::alternating);
    CHECK(sample_trajectory(ModelParams(0.9, 0.0), 2, seed, false).regimes[0] == Regime::random);
  }
}

TEST_CASE("long-run statistics of the sampler") {
  const double rho = 0.9;
  const std::size_t n = 1'000'000;
  const auto t = sample_trajectory(ModelParams(rho, 0.5, 0.8), n + 1, 2026, true);

  SUBCASE("stationary regime occupancy is 1/2") {
    std::size_t zeros = 0;
    for (Regime r : t.regimes) zeros += r == Regime::alternating;
    const double frac = static_cast<double>(zeros) / static_cast<double>(n);
    // Symmetric chain with lag-one correlation 2 rho - 1: the variance of the
    // occupancy mean is inflated by (1 + lambda) / (1 - lambda).
    const double lambda = 2.0 * rho - 1.0;
    const double sigma = std::sqrt(0.25 / static_cast<double>(n) * (1.0 + lambda) / (1.0 - lambda));
    CHECK(std::fabs(frac - 0.5) <= 3.0 * sigma);
  }

  SUBCASE("signal agreement rate converges to gamma") {
    std::size_t agree = 0;
    for (std::size_t i = 0; i < n; ++i) agree += (*t.signals)[i] == t.regimes[i];
    const double frac = static_cast<double>(agree) / static_cast<double>(n);
    CHECK(std::fabs(frac - 0.8) <= 4.0 * std::sqrt(0.8 * 0.2 / static_cast<double>(n)));
  }

  SUBCASE("mean regime run length is 1 / (1 - rho)") {
    std::vector<double> runs;
    std::size_t len = 1;
    for (std::size_t i = 1; i < n; ++i) {
      if (t.regimes[i] == t.regimes[i - 1]) {
        ++len;
      } else {
        runs.push_back(static_cast<double>(len));
        len = 1;
      }
    }
    double mean = 0.0;
    for (double r : runs) mean += r;
    mean /= static_cast<double>(runs.size());
    // Geometric run lengths: variance rho / (1 - rho)^2.
    const double sd = std::sqrt(rho) / (1.0 - rho);
    CHECK(std::fabs(mean - 1.0 / (1.0 - rho)) <= 4.0 * sd / std::sqrt(static_cast<double>(runs.size())));
  }
}

TEST_CASE("derive_seed is deterministic and spreads indices") {
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("trajectory JSON lines round-trip") {
  const ModelParams params(0.75, 0.25, 0.9);
  const auto t = sample_trajectory(params, 64, 99, true);
  const std::string line = to_jsonl(t, params);
  CHECK(line.find('\n') == std::string::npos);
  const auto parsed = parse_jsonl(line);
  CHECK(parsed.trajectory == t);
  CHECK(parsed.params == params);

  const auto no_sig = sample_trajectory(params, 10, 1, false);
  CHECK(parse_jsonl(to_jsonl(no_sig, params)).trajectory == no_sig);

  CHECK_THROWS_AS(parse_jsonl("not json"), Error);
  CHECK_THROWS_AS(
      parse_jsonl(R"({"seed":1,"params":{"rho":0.9,"pi_init":0.5,"gamma":0.5},)"
                  R"("tokens":"012","regimes":"00","signals":null})"),
      Error);
  CHECK_THROWS_AS(
      parse_jsonl(R"({"seed":1,"params":{"rho":0.9,"pi_init":0.5,"gamma":0.5},)"
                  R"("tokens":"01","regimes":"000","signals":null})"),
      Error);
}
