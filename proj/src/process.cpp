#include "mixreg/process.hpp"

#include <random>

#include <json.hpp>

#include "mixreg/error.hpp"
#include "random.hpp"

namespace mixreg {

namespace {

using detail::random_bit;
using detail::uniform01;

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

template <typename T, typename F>
std::string bits_to_string(const std::vector<T>& values, F to_int) {
  std::string out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(to_int(v) ? '1' : '0');
  return out;
}

std::vector<Token> string_to_bits(const std::string& text, const char* field) {
  std::vector<Token> out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '0' && text[i] != '1') {
      fail(ErrorCode::parse, std::string("non-binary character in '") + field + "'", i + 1);
    }
    out.push_back(static_cast<Token>(text[i] - '0'));
  }
  return out;
}

std::vector<Regime> to_regimes(const std::vector<Token>& bits) {
  std::vector<Regime> out;
  out.reserve(bits.size());
  for (Token b : bits) out.push_back(to_regime(b));
  return out;
}

}  // namespace

ModelParams::ModelParams(double rho, double pi_init, double gamma)
    : rho_(rho), pi_init_(pi_init), gamma_(gamma) {
  require_in_open(rho, 0.5, 1.0, "rho");
  require_in_closed(pi_init, 0.0, 1.0, "pi_init");
  require_in_closed(gamma, 0.5, 1.0, "gamma");
}

TransitionMatrix transition_matrix(double rho) {
  require_in_open(rho, 0.5, 1.0, "rho");
  const double leave = 1.0 - rho;
  return {{{rho, leave}, {leave, rho}}};
}

double emission_prob(Regime regime, Token prev_token, Token token) {
  if (regime == Regime::random) return 0.5;
  return token == 1 - prev_token ? 1.0 : 0.0;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(master + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

Trajectory sample_trajectory(const ModelParams& params, std::size_t length,
                             std::uint64_t seed, bool with_signals) {
  if (length < 2) fail(ErrorCode::parameter, "trajectory length must be >= 2");

  std::mt19937_64 rng(seed);
  Trajectory out;
  out.seed = seed;
  out.tokens.reserve(length);
  out.regimes.reserve(length - 1);
  std::vector<Regime> signals;
  if (with_signals) signals.reserve(length - 1);

  out.tokens.push_back(random_bit(rng));
  Regime regime = uniform01(rng) < params.pi_init() ? Regime::alternating : Regime::random;
  for (std::size_t t = 1; t < length; ++t) {
    if (t > 1 && !(uniform01(rng) < params.rho())) {
      regime = regime == Regime::alternating ? Regime::random : Regime::alternating;
    }
    const Token prev = out.tokens.back();
    out.tokens.push_back(regime == Regime::alternating ? static_cast<Token>(1 - prev)
                                                       : random_bit(rng));
    out.regimes.push_back(regime);

    const bool truthful = uniform01(rng) < params.gamma();
    if (with_signals) {
      signals.push_back(truthful ? regime
                                 : (regime == Regime::alternating ? Regime::random
                                                                  : Regime::alternating));
    }
  }
  if (with_signals) out.signals = std::move(signals);
  return out;
}

std::string to_jsonl(const Trajectory& trajectory, const ModelParams& params) {
  auto regime_bit = [](Regime r) { return to_bit(r); };
  nlohmann::ordered_json j;
  j["seed"] = trajectory.seed;
  j["params"] = {{"rho", params.rho()}, {"pi_init", params.pi_init()}, {"gamma", params.gamma()}};
  j["tokens"] = bits_to_string(trajectory.tokens, [](Token t) { return t; });
  j["regimes"] = bits_to_string(trajectory.regimes, regime_bit);
  if (trajectory.signals) {
    j["signals"] = bits_to_string(*trajectory.signals, regime_bit);
  } else {
    j["signals"] = nullptr;
  }
  return j.dump();
}

ParsedTrajectory parse_jsonl(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::parse, std::string("trajectory record: ") + e.what());
  }
  try {
    const auto& p = j.at("params");
    ModelParams params(p.at("rho").get<double>(), p.at("pi_init").get<double>(),
                       p.at("gamma").get<double>());
    Trajectory t;
    t.seed = j.at("seed").get<std::uint64_t>();
    t.tokens = string_to_bits(j.at("tokens").get<std::string>(), "tokens");
    t.regimes = to_regimes(string_to_bits(j.at("regimes").get<std::string>(), "regimes"));
    if (!j.at("signals").is_null()) {
      t.signals = to_regimes(string_to_bits(j.at("signals").get<std::string>(), "signals"));
    }
    if (t.tokens.size() < 2 || t.regimes.size() + 1 != t.tokens.size() ||
        (t.signals && t.signals->size() != t.regimes.size())) {
      fail(ErrorCode::parse, "trajectory record: inconsistent field lengths");
    }
    return {std::move(t), params};
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::parse, std::string("trajectory record: ") + e.what());
  }
}

}  // namespace mixreg
