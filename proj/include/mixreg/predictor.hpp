#pragma once

#include "mixreg/process.hpp"

namespace mixreg {

/// Probability of the alternating continuation 1 - x_t.
struct PredictiveDistribution {
  double p_alt = 0.5;

  double p_repeat() const noexcept { return 1.0 - p_alt; }
};

/// Text-only marginal: (1 + pi0) / 2.
PredictiveDistribution marginal_predictive(double pi0);

/// Degenerate distributions (p_alt in {0, 1}) are fixed points. T may be
/// +infinity, which yields the uniform distribution.
PredictiveDistribution temperature_scale(const PredictiveDistribution& dist,
                                         double temperature);

/// Probability of sampling the alternation-violating token at temperature T
/// when the marginal assigns alpha to the valid one.
double structural_error_prob(double alpha, double temperature);

/// P(Z = alternating | history, R = signal) given the text-only pi0 and an
/// oracle of fidelity gamma.
double grounded_posterior(double pi0, double gamma, Regime signal);

/// aware == false ignores the signal entirely.
PredictiveDistribution augmented_predictive(double pi0, double gamma,
                                            Regime signal, bool aware);

/// Fidelity above which a corrective signal (R = random) reverses the
/// posterior odds. Requires pi0 in (1/2, 1).
double dominance_threshold(double pi0);

}  // namespace mixreg
