#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mixreg {

using Token = std::uint8_t;

/// Latent regime governing one emission. Signals report a claimed regime, so
/// they share this type.
enum class Regime : std::uint8_t {
  alternating = 0,  // next token is 1 - previous token with certainty
  random = 1,       // next token is a fair coin
};

constexpr Regime to_regime(int bit) noexcept {
  return bit == 0 ? Regime::alternating : Regime::random;
}
constexpr int to_bit(Regime r) noexcept { return static_cast<int>(r); }

/// Model parameters. Construction validates and never clamps.
class ModelParams {
 public:
  /// rho in (1/2, 1), pi_init in [0, 1], gamma in [1/2, 1].
  ModelParams(double rho, double pi_init, double gamma = 0.5);

  double rho() const noexcept { return rho_; }
  double pi_init() const noexcept { return pi_init_; }
  double gamma() const noexcept { return gamma_; }

  ModelParams with_gamma(double gamma) const { return {rho_, pi_init_, gamma}; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  double rho_;
  double pi_init_;
  double gamma_;
};

using TransitionMatrix = std::array<std::array<double, 2>, 2>;

TransitionMatrix transition_matrix(double rho);

double emission_prob(Regime regime, Token prev_token, Token token);

/// regimes[i] governs tokens[i + 1]; signals[i] is the oracle report on
/// regimes[i].
struct Trajectory {
  std::vector<Token> tokens;
  std::vector<Regime> regimes;
  std::optional<std::vector<Regime>> signals;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return tokens.size(); }
  bool alternates_at(std::size_t i) const noexcept {
    return tokens[i + 1] != tokens[i];
  }

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Pure function of its arguments. Signal draws consume the same number of
/// random variates whether or not they are kept, so tokens and regimes do not
/// depend on with_signals or gamma.
Trajectory sample_trajectory(const ModelParams& params, std::size_t length,
                             std::uint64_t seed, bool with_signals);

/// Child seed for stream `index` of `master`. SplitMix64 finalizer applied to
/// master + (index + 1) * 0x9E3779B97F4A7C15.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// One JSON object, no trailing newline:
/// {"seed":..,"params":{"rho":..,"pi_init":..,"gamma":..},
///  "tokens":"0101..","regimes":"1101..","signals":"..."|null}
std::string to_jsonl(const Trajectory& trajectory, const ModelParams& params);

struct ParsedTrajectory {
  Trajectory trajectory;
  ModelParams params;
};

ParsedTrajectory parse_jsonl(const std::string& line);

}  // namespace mixreg
