#include "mixreg/filter.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mixreg/error.hpp"

namespace mixreg {

PosteriorState filter_init(const ModelParams& params) {
  return {params.pi_init(), 1};
}

PosteriorState filter_step(const PosteriorState& state, Token prev_token, Token new_token,
                           const ModelParams& params) {
  const double w0 = state.pi0 * emission_prob(Regime::alternating, prev_token, new_token);
  const double w1 = (1.0 - state.pi0) * emission_prob(Regime::random, prev_token, new_token);
  const double total = w0 + w1;
  const std::size_t position = state.position + 1;
  if (!(total > 0.0)) {
    fail(ErrorCode::impossible_observation,
         "token at position " + std::to_string(position) +
             " breaks alternation under a certain alternating regime",
         position);
  }
  const double g0 = w0 / total;
  const double rho = params.rho();
  return {g0 * rho + (1.0 - g0) * (1.0 - rho), position};
}

std::vector<PosteriorState> filter_prefix(const ModelParams& params,
                                          std::span<const Token> tokens) {
  if (tokens.empty()) fail(ErrorCode::parameter, "filter_prefix needs at least one token");
  std::vector<PosteriorState> out;
  out.reserve(tokens.size());
  out.push_back(filter_init(params));
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    out.push_back(filter_step(out.back(), tokens[i - 1], tokens[i], params));
  }
  return out;
}

PosteriorState brute_force_posterior(const ModelParams& params,
                                     std::span<const Token> tokens) {
  const std::size_t n = tokens.size();
  if (n == 0) fail(ErrorCode::parameter, "brute_force_posterior needs at least one token");
  if (n > kBruteForceMaxLength) {
    fail(ErrorCode::size, "brute_force_posterior supports at most " +
                              std::to_string(kBruteForceMaxLength) + " tokens");
  }
  const TransitionMatrix trans = transition_matrix(params.rho());
  const double prior[2] = {params.pi_init(), 1.0 - params.pi_init()};

  // Bit j of `path` is z_{j+2}, the regime governing tokens[j + 1].
  const std::size_t governed = n - 1;
  double numerator = 0.0;
  double denominator = 0.0;
  if (governed == 0) {
    return {params.pi_init(), 1};
  }
  const std::uint64_t paths = std::uint64_t{1} << governed;
  for (std::uint64_t path = 0; path < paths; ++path) {
    int z = static_cast<int>(path & 1U);
    double joint = prior[z] * emission_prob(to_regime(z), tokens[0], tokens[1]);
    for (std::size_t j = 1; j < governed && joint > 0.0; ++j) {
      const int next = static_cast<int>((path >> j) & 1U);
      joint *= trans[z][next] * emission_prob(to_regime(next), tokens[j], tokens[j + 1]);
      z = next;
    }
    if (joint == 0.0) continue;
    numerator += joint * trans[z][0];
    denominator += joint;
  }
  if (!(denominator > 0.0)) {
    fail(ErrorCode::impossible_observation, "prefix has zero probability under the model");
  }
  return {numerator / denominator, n};
}

OracleCheckResult oracle_check(std::size_t max_length, std::span<const double> rhos,
                               std::span<const double> pi_inits) {
  if (max_length < 1 || max_length > kBruteForceMaxLength) {
    fail(ErrorCode::parameter,
         "oracle check max length must be in [1, " + std::to_string(kBruteForceMaxLength) + "]");
  }
  OracleCheckResult result;
  std::vector<Token> tokens;
  for (double rho : rhos) {
    for (double pi_init : pi_inits) {
      const ModelParams params(rho, pi_init);
      for (std::size_t len = 1; len <= max_length; ++len) {
        tokens.assign(len, 0);
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << len); ++bits) {
          for (std::size_t i = 0; i < len; ++i) tokens[i] = static_cast<Token>((bits >> i) & 1U);
          double filtered = 0.0;
          double enumerated = 0.0;
          bool filter_ok = true;
          bool oracle_ok = true;
          try {
            filtered = filter_prefix(params, tokens).back().pi0;
          } catch (const Error&) {
            filter_ok = false;
          }
          try {
            enumerated = brute_force_posterior(params, tokens).pi0;
          } catch (const Error&) {
            oracle_ok = false;
          }
          // Both sides must agree on impossibility too.
          const double deviation =
              filter_ok != oracle_ok ? INFINITY
                                     : (filter_ok ? std::fabs(filtered - enumerated) : 0.0);
          result.max_deviation = std::max(result.max_deviation, deviation);
          ++result.prefixes_compared;
        }
      }
    }
  }
  return result;
}

}  // namespace mixreg
