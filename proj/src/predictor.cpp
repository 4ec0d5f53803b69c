#include "mixreg/predictor.hpp"

#include <cmath>

#include "mixreg/error.hpp"

namespace mixreg {

namespace {

void require_temperature(double temperature) {
  if (!(temperature > 0.0)) fail(ErrorCode::parameter, "temperature must be > 0");
}

}  // namespace

PredictiveDistribution marginal_predictive(double pi0) {
  require_in_closed(pi0, 0.0, 1.0, "pi0");
  return {0.5 * (1.0 + pi0)};
}

PredictiveDistribution temperature_scale(const PredictiveDistribution& dist,
                                         double temperature) {
  require_temperature(temperature);
  const double p = dist.p_alt;
  require_in_closed(p, 0.0, 1.0, "p_alt");
  if (p == 0.0 || p == 1.0 || temperature == 1.0) return dist;
  // Odds form: p^(1/T) / (p^(1/T) + q^(1/T)) == 1 / (1 + (q/p)^(1/T)), which
  // stays finite when p^(1/T) underflows at small T.
  if (p >= 0.5) {
    const double odds = std::pow((1.0 - p) / p, 1.0 / temperature);
    return {1.0 / (1.0 + odds)};
  }
  const double odds = std::pow(p / (1.0 - p), 1.0 / temperature);
  return {odds / (1.0 + odds)};
}

double structural_error_prob(double alpha, double temperature) {
  require_in_open(alpha, 0.5, 1.0, "alpha");
  require_temperature(temperature);
  if (temperature == 1.0) return 1.0 - alpha;
  const double u = std::pow((1.0 - alpha) / alpha, 1.0 / temperature);
  return u / (1.0 + u);
}

double grounded_posterior(double pi0, double gamma, Regime signal) {
  require_in_closed(pi0, 0.0, 1.0, "pi0");
  require_in_closed(gamma, 0.5, 1.0, "gamma");
  // P(R = signal | Z = alternating) and P(R = signal | Z = random).
  const double like_alt = signal == Regime::alternating ? gamma : 1.0 - gamma;
  const double like_rand = signal == Regime::random ? gamma : 1.0 - gamma;
  const double numerator = like_alt * pi0;
  const double denominator = numerator + like_rand * (1.0 - pi0);
  if (!(denominator > 0.0)) {
    fail(ErrorCode::impossible_evidence, "signal has zero probability under both regimes");
  }
  return numerator / denominator;
}

PredictiveDistribution augmented_predictive(double pi0, double gamma, Regime signal,
                                            bool aware) {
  if (!aware) {
    require_in_closed(gamma, 0.5, 1.0, "gamma");
    return marginal_predictive(pi0);
  }
  return {0.5 * (1.0 + grounded_posterior(pi0, gamma, signal))};
}

double dominance_threshold(double pi0) {
  require_in_closed(pi0, 0.0, 1.0, "pi0");
  if (!(pi0 > 0.5 && pi0 < 1.0)) {
    fail(ErrorCode::precondition,
         "dominance threshold requires a dominant misleading prior, pi0 in (1/2, 1)");
  }
  return pi0;
}

}  // namespace mixreg
