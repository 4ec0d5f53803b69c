#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mixreg/process.hpp"
#include "mixreg/table.hpp"

namespace mixreg {

/// Accepts only '0' and '1'; a bad character raises ErrorCode::parse with its
/// 1-based position.
std::vector<Token> parse_token_string(std::string_view text);
std::string token_string(std::span<const Token> tokens);

/// Columns: t, x_t, pi0, p_alt, mixture_entropy, gap, pointwise_mi.
Table filter_trace_table(const ModelParams& params, std::span<const Token> tokens);

enum class SweepKind { gap, temperature, gamma, residual_mi };

const char* to_string(SweepKind kind) noexcept;
std::optional<SweepKind> parse_sweep_kind(std::string_view name);

struct SweepSpec {
  SweepKind kind = SweepKind::gap;
  std::vector<double> pi0;
  std::vector<double> alpha;
  std::vector<double> temperature;
  std::vector<double> gamma;

  /// Empty axes get the kind's default grid; out-of-range values throw.
  SweepSpec resolved() const;

  static SweepSpec from_json(std::string_view text);
  std::string to_json() const;
};

/// One row per grid point of the resolved spec.
Table sweep_table(const SweepSpec& spec);

/// n evenly spaced points from lo to hi inclusive. Point i is
/// (lo * (n - 1 - i) + hi * i) / (n - 1), so endpoints are exact and grids over
/// "round" decimals hit them as closely as a single division allows.
std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace mixreg
