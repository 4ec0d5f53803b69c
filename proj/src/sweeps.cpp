#include "mixreg/sweeps.hpp"

#include <json.hpp>

#include "mixreg/error.hpp"
#include "mixreg/filter.hpp"
#include "mixreg/infotheory.hpp"
#include "mixreg/predictor.hpp"

namespace mixreg {

namespace {

void require_axis(const std::vector<double>& values, const char* name) {
  if (values.empty()) fail(ErrorCode::parameter, std::string("sweep grid '") + name + "' is empty");
}

}  // namespace

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> out(n);
  const double d = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = static_cast<double>(i);
    out[i] = (lo * (d - w) + hi * w) / d;
  }
  return out;
}

std::vector<Token> parse_token_string(std::string_view text) {
  if (text.empty()) fail(ErrorCode::parse, "token string is empty");
  std::vector<Token> tokens;
  tokens.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '0' && c != '1') {
      fail(ErrorCode::parse,
           "invalid token '" + std::string(1, c) + "' at position " + std::to_string(i + 1) +
               " (expected 0 or 1)",
           i + 1);
    }
    tokens.push_back(static_cast<Token>(c - '0'));
  }
  return tokens;
}

std::string token_string(std::span<const Token> tokens) {
  std::string out;
  out.reserve(tokens.size());
  for (Token t : tokens) out.push_back(t ? '1' : '0');
  return out;
}

Table filter_trace_table(const ModelParams& params, std::span<const Token> tokens) {
  Table table({"t", "x_t", "pi0", "p_alt", "mixture_entropy", "gap", "pointwise_mi"});
  const auto states = filter_prefix(params, tokens);
  for (std::size_t i = 0; i < states.size(); ++i) {
    const double pi0 = states[i].pi0;
    table.add_row({static_cast<std::int64_t>(states[i].position),
                   static_cast<std::int64_t>(tokens[i]), pi0, marginal_predictive(pi0).p_alt,
                   mixture_entropy(pi0), sufficiency_gap(pi0).gap, pointwise_mutual_info(pi0)});
  }
  return table;
}

const char* to_string(SweepKind kind) noexcept {
  switch (kind) {
    case SweepKind::gap: return "gap";
    case SweepKind::temperature: return "temperature";
    case SweepKind::gamma: return "gamma";
    case SweepKind::residual_mi: return "residual-mi";
  }
  return "unknown";
}

std::optional<SweepKind> parse_sweep_kind(std::string_view name) {
  for (auto k : {SweepKind::gap, SweepKind::temperature, SweepKind::gamma, SweepKind::residual_mi}) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

SweepSpec SweepSpec::resolved() const {
  SweepSpec s = *this;
  switch (kind) {
    case SweepKind::gap:
      if (s.pi0.empty()) s.pi0 = linspace(0.0, 1.0, 21);
      s.alpha.clear();
      s.temperature.clear();
      s.gamma.clear();
      break;
    case SweepKind::temperature:
      if (s.alpha.empty()) s.alpha = {0.75};
      if (s.temperature.empty()) s.temperature = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
      s.pi0.clear();
      s.gamma.clear();
      break;
    case SweepKind::gamma:
      if (s.pi0.empty()) s.pi0 = {0.9};
      if (s.gamma.empty()) s.gamma = linspace(0.5, 1.0, 11);
      s.alpha.clear();
      s.temperature.clear();
      break;
    case SweepKind::residual_mi:
      if (s.pi0.empty()) s.pi0 = {0.1, 0.5, 0.9};
      if (s.gamma.empty()) s.gamma = linspace(0.5, 1.0, 11);
      s.alpha.clear();
      s.temperature.clear();
      break;
  }
  for (double v : s.pi0) require_in_closed(v, 0.0, 1.0, "pi0");
  for (double v : s.alpha) require_in_open(v, 0.5, 1.0, "alpha");
  for (double v : s.temperature) {
    if (!(v > 0.0)) fail(ErrorCode::parameter, "temperature grid values must be > 0");
  }
  for (double v : s.gamma) require_in_closed(v, 0.5, 1.0, "gamma");
  return s;
}

SweepSpec SweepSpec::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::parse, std::string("sweep spec: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::parse, "sweep spec must be a JSON object");
  SweepSpec s;
  bool have_kind = false;
  for (const auto& [key, value] : j.items()) {
    if (key == "kind") {
      if (!value.is_string()) fail(ErrorCode::parse, "sweep kind must be a string");
      const auto kind = parse_sweep_kind(value.get<std::string>());
      if (!kind) fail(ErrorCode::parse, "unknown sweep kind '" + value.get<std::string>() + "'");
      s.kind = *kind;
      have_kind = true;
      continue;
    }
    std::vector<double>* axis = key == "pi0"           ? &s.pi0
                                : key == "alpha"       ? &s.alpha
                                : key == "temperature" ? &s.temperature
                                : key == "gamma"       ? &s.gamma
                                                       : nullptr;
    if (axis == nullptr) fail(ErrorCode::parse, "unknown sweep key '" + key + "'");
    if (!value.is_array()) fail(ErrorCode::parse, "sweep grid '" + key + "' must be an array");
    for (const auto& v : value) {
      if (!v.is_number()) fail(ErrorCode::parse, "sweep grid '" + key + "' must hold numbers");
      axis->push_back(v.get<double>());
    }
    require_axis(*axis, key.c_str());
  }
  if (!have_kind) fail(ErrorCode::parse, "sweep spec needs a \"kind\"");
  return s;
}

std::string SweepSpec::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = to_string(kind);
  if (!pi0.empty()) j["pi0"] = pi0;
  if (!alpha.empty()) j["alpha"] = alpha;
  if (!temperature.empty()) j["temperature"] = temperature;
  if (!gamma.empty()) j["gamma"] = gamma;
  return j.dump();
}

Table sweep_table(const SweepSpec& spec) {
  const SweepSpec s = spec.resolved();
  switch (s.kind) {
    case SweepKind::gap: {
      Table t({"pi0", "h_marginal", "h_true_conditional", "gap"});
      for (double pi0 : s.pi0) {
        const EntropyReport r = sufficiency_gap(pi0);
        t.add_row({pi0, r.h_marginal, r.h_true_conditional, r.gap});
      }
      return t;
    }
    case SweepKind::temperature: {
      Table t({"alpha", "temperature", "p_alt_scaled", "epsilon"});
      for (double alpha : s.alpha) {
        for (double temp : s.temperature) {
          t.add_row({alpha, temp, temperature_scale({alpha}, temp).p_alt,
                     structural_error_prob(alpha, temp)});
        }
      }
      return t;
    }
    case SweepKind::gamma: {
      Table t({"pi0", "gamma", "q", "p_alt", "entropy_after_grounding", "residual_gap",
               "reversal", "gamma_crit"});
      for (double pi0 : s.pi0) {
        for (double gamma : s.gamma) {
          const double q = grounded_posterior(pi0, gamma, Regime::random);
          Cell entropy = std::monostate{};
          Cell residual = std::monostate{};
          if (pi0 > 0.0 && pi0 < 1.0) {
            const double h = entropy_after_grounding(pi0, gamma);
            entropy = h;
            residual = 1.0 - h;
          }
          Cell crit = std::monostate{};
          if (pi0 > 0.5 && pi0 < 1.0) crit = dominance_threshold(pi0);
          t.add_row({pi0, gamma, q,
                     augmented_predictive(pi0, gamma, Regime::random, true).p_alt, entropy,
                     residual, q < 0.5, crit});
        }
      }
      return t;
    }
    case SweepKind::residual_mi: {
      Table t({"pi0", "gamma", "pointwise_mi", "expected_residual_mi"});
      for (double pi0 : s.pi0) {
        for (double gamma : s.gamma) {
          t.add_row({pi0, gamma, pointwise_mutual_info(pi0), expected_residual_mi(pi0, gamma)});
        }
      }
      return t;
    }
  }
  fail(ErrorCode::parameter, "unknown sweep kind");
}

}  // namespace mixreg
