#include "mixreg/infotheory.hpp"

#include <algorithm>
#include <cmath>

#include "mixreg/error.hpp"
#include "mixreg/predictor.hpp"

namespace mixreg {

double binary_entropy(double p) {
  require_in_closed(p, 0.0, 1.0, "p");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double mixture_entropy(double pi0) {
  require_in_closed(pi0, 0.0, 1.0, "pi0");
  return binary_entropy(0.5 * (1.0 + pi0));
}

EntropyReport sufficiency_gap(double pi0) {
  EntropyReport report;
  report.pi0 = pi0;
  report.h_marginal = mixture_entropy(pi0);
  report.h_true_conditional = 1.0;
  report.gap = report.h_true_conditional - report.h_marginal;
  return report;
}

double pointwise_mutual_info(double pi0) {
  // H(X | history) - sum_k P(k) H(X | history, k); the alternating regime
  // contributes zero entropy and the random regime one bit.
  return std::max(0.0, mixture_entropy(pi0) - (1.0 - pi0));
}

double expected_residual_mi(double pi0, double gamma) {
  require_in_closed(pi0, 0.0, 1.0, "pi0");
  require_in_closed(gamma, 0.5, 1.0, "gamma");
  double total = 0.0;
  for (Regime signal : {Regime::alternating, Regime::random}) {
    const double like_alt = signal == Regime::alternating ? gamma : 1.0 - gamma;
    const double like_rand = signal == Regime::random ? gamma : 1.0 - gamma;
    const double p_signal = like_alt * pi0 + like_rand * (1.0 - pi0);
    if (p_signal == 0.0) continue;
    total += p_signal * pointwise_mutual_info(grounded_posterior(pi0, gamma, signal));
  }
  return total;
}

double entropy_after_grounding(double pi0, double gamma) {
  require_in_open(pi0, 0.0, 1.0, "pi0");
  const double q = grounded_posterior(pi0, gamma, Regime::random);
  return binary_entropy(0.5 * (1.0 + q));
}

double internal_entropy(double pi0) { return mixture_entropy(pi0); }

}  // namespace mixreg
