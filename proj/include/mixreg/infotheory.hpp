#pragma once

namespace mixreg {

/// All quantities in bits.
struct EntropyReport {
  double h_marginal = 0.0;
  double h_true_conditional = 0.0;
  double gap = 0.0;
  double pi0 = 0.0;
};

double binary_entropy(double p);

/// Entropy of the text-only next-token mixture, H2((1 + pi0) / 2).
double mixture_entropy(double pi0);

/// Gap between the true regime-conditional entropy (random regime, one bit)
/// and the text-only marginal entropy.
EntropyReport sufficiency_gap(double pi0);

/// I(X_{t+1}; Z_{t+1} | history) = H2((1 + pi0) / 2) - (1 - pi0).
double pointwise_mutual_info(double pi0);

/// E_R[ I(X; Z | history, R) ] for an oracle of fidelity gamma. Signal values
/// with zero probability contribute nothing.
double expected_residual_mi(double pi0, double gamma);

/// Predictive entropy after a corrective signal R = random.
double entropy_after_grounding(double pi0, double gamma);

/// The predictor's own view of its uncertainty. Takes only the posterior, so
/// it cannot depend on the realized regime.
double internal_entropy(double pi0);

}  // namespace mixreg
