#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mixreg/process.hpp"

namespace mixreg {

/// P(Z_{t+1} = alternating | x_1..x_t), where t == position.
struct PosteriorState {
  double pi0 = 0.0;
  std::size_t position = 1;
};

PosteriorState filter_init(const ModelParams& params);

/// Bayes update on x_{t+1}, then one transition step. Throws
/// impossible_observation when the observed token has zero likelihood.
PosteriorState filter_step(const PosteriorState& state, Token prev_token,
                           Token new_token, const ModelParams& params);

/// Element i conditions on tokens[0..i].
std::vector<PosteriorState> filter_prefix(const ModelParams& params,
                                          std::span<const Token> tokens);

inline constexpr std::size_t kBruteForceMaxLength = 20;

/// Enumerates every regime path z_2..z_n and sums joint probabilities.
/// Independent of filter_step; used as the validation oracle.
PosteriorState brute_force_posterior(const ModelParams& params,
                                     std::span<const Token> tokens);

struct OracleCheckResult {
  double max_deviation = 0.0;
  std::size_t prefixes_compared = 0;
};

/// Compares filter_prefix against brute_force_posterior on every binary prefix
/// of length 1..max_length for every (rho, pi_init) pair.
OracleCheckResult oracle_check(std::size_t max_length, std::span<const double> rhos,
                               std::span<const double> pi_inits);

}  // namespace mixreg
