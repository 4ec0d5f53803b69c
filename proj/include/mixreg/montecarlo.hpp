#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mixreg/process.hpp"
#include "mixreg/table.hpp"

namespace mixreg {

enum class ExperimentKind { calibration, false_authority, threshold, temperature };

const char* to_string(ExperimentKind kind) noexcept;
std::optional<ExperimentKind> parse_experiment_kind(std::string_view name);

/// Sweep axes understood by the experiments: "temperature" (temperature),
/// "gamma" (threshold), "confidence_cut" (false-authority). An axis that is
/// absent falls back to the experiment's default grid.
using SweepGrid = std::map<std::string, std::vector<double>>;

struct ExperimentConfig {
  ModelParams params{0.9, 0.5, 0.9};
  std::size_t n_trajectories = 1000;
  std::size_t trajectory_length = 1001;  // 1000 prediction steps each
  std::uint64_t master_seed = 20260101;
  std::size_t workers = 1;               // never changes results
  bool aware = false;                    // false-authority: use the signal
  std::size_t bins = 10;                 // calibration bins over [1/2, 1]
  double sigma_band = 4.0;
  std::size_t min_samples = 30;          // fewer conditioned samples => flagged
  SweepGrid sweep;

  /// Throws ErrorCode::parameter on any violated invariant.
  void validate() const;

  /// Flat JSON object; missing keys take the defaults above. Unknown keys are
  /// rejected.
  static ExperimentConfig from_json(std::string_view text);

  /// Every field materialized, including the default grid for `kind`.
  std::string to_json(ExperimentKind kind) const;

  std::vector<double> sweep_or_default(ExperimentKind kind) const;
};

struct NamedValue {
  std::string name;
  double value = 0.0;
};

struct ExperimentRecord {
  std::vector<NamedValue> parameters;
  double estimate = 0.0;
  double std_error = 0.0;
  double prediction = 0.0;
  double deviation = 0.0;   // |estimate - prediction|
  std::size_t samples = 0;
  double tolerance_sigma = 0.0;
  bool checked = false;     // false for flagged records, which are skipped
  bool pass = false;
  std::string flag = "ok";  // ok | empty | insufficient
  std::vector<NamedValue> metrics;
};

struct ExperimentResult {
  ExperimentKind kind;
  ExperimentConfig config;
  std::vector<ExperimentRecord> records;
  std::vector<std::string> failures;  // human-readable, one per failed check

  bool all_passed() const noexcept { return failures.empty(); }

  /// Config echo columns, then parameters, statistics, and metrics.
  Table to_table() const;
  std::string to_csv() const { return to_table().to_csv(); }

  /// First line: {"type":"config",...}; then one {"type":"record",...} per
  /// record.
  std::string to_jsonl() const;
};

/// Reliability of the text-only marginal: per p_alt bin, empirical
/// alternation frequency vs mean prediction.
ExperimentResult run_calibration(const ExperimentConfig& config);

/// Steps whose true regime is random and whose predicted p_alt >= cut.
ExperimentResult run_false_authority(const ExperimentConfig& config);

/// Per gamma: fraction of dominant-prior, random-regime, corrective-signal
/// steps whose grounded posterior drops below 1/2.
ExperimentResult run_threshold_experiment(const ExperimentConfig& config);

/// Per temperature: invalid-token rate in the alternating regime when
/// decoding from the temperature-scaled marginal.
ExperimentResult run_temperature_experiment(const ExperimentConfig& config);

ExperimentResult run_experiment(ExperimentKind kind, const ExperimentConfig& config);

/// Binomial-style standard error for a mean of Bernoulli outcomes whose
/// success probabilities sum to variance_sum = sum p_i (1 - p_i). Floored at
/// half a count, 1 / (2 n), so a degenerate bin still reports a resolution.
double bernoulli_mean_std_error(double variance_sum, std::size_t n);

}  // namespace mixreg
