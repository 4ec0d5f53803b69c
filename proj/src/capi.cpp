#include "mixreg/mixreg.h"

#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mixreg/decision.hpp"
#include "mixreg/error.hpp"
#include "mixreg/filter.hpp"
#include "mixreg/infotheory.hpp"
#include "mixreg/montecarlo.hpp"
#include "mixreg/predictor.hpp"
#include "mixreg/process.hpp"
#include "mixreg/sweeps.hpp"
#include "mixreg/version.hpp"

struct mixreg_trajectory {
  mixreg::Trajectory trajectory;
  mixreg::ModelParams params;
  std::string jsonl;
};

struct mixreg_loss {
  mixreg::LossMatrix matrix;
};

struct mixreg_table {
  mixreg::Table table;
  std::string csv;
  std::string config;
};

struct mixreg_experiment {
  mixreg::ExperimentKind kind;
  mixreg::ExperimentConfig config;
  std::string config_json;
  std::optional<mixreg::ExperimentResult> result;
  std::string csv;
  std::string jsonl;
  std::string failures;
};

namespace {

thread_local std::string g_last_error;
thread_local std::size_t g_last_position = 0;

mixreg_status to_status(mixreg::ErrorCode code) {
  using mixreg::ErrorCode;
  switch (code) {
    case ErrorCode::parameter: return MIXREG_ERR_PARAMETER;
    case ErrorCode::impossible_observation: return MIXREG_ERR_IMPOSSIBLE_OBSERVATION;
    case ErrorCode::impossible_evidence: return MIXREG_ERR_IMPOSSIBLE_EVIDENCE;
    case ErrorCode::size: return MIXREG_ERR_SIZE;
    case ErrorCode::precondition: return MIXREG_ERR_PRECONDITION;
    case ErrorCode::parse: return MIXREG_ERR_PARSE;
    case ErrorCode::io: return MIXREG_ERR_IO;
  }
  return MIXREG_ERR_INTERNAL;
}

mixreg_status set_error(mixreg_status status, std::string message, std::size_t position = 0) {
  g_last_error = std::move(message);
  g_last_position = position;
  return status;
}

// Runs fn, translating exceptions into status codes. Nothing escapes the C
// boundary.
template <typename Fn>
mixreg_status guarded(Fn&& fn) noexcept {
  try {
    g_last_error.clear();
    g_last_position = 0;
    fn();
    return MIXREG_OK;
  } catch (const mixreg::Error& e) {
    return set_error(to_status(e.code()), e.what(), e.position().value_or(0));
  } catch (const std::bad_alloc&) {
    return set_error(MIXREG_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(MIXREG_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(MIXREG_ERR_INTERNAL, "unknown exception");
  }
}

#define MIXREG_REQUIRE(ptr)                                                      \
  do {                                                                           \
    if ((ptr) == nullptr) {                                                      \
      return set_error(MIXREG_ERR_NULL_ARGUMENT, "null argument: " #ptr);        \
    }                                                                            \
  } while (0)

mixreg::ModelParams to_params(const mixreg_params& p) {
  return mixreg::ModelParams(p.rho, p.pi_init, p.gamma);
}

mixreg::Regime to_regime_checked(int bit, const char* name) {
  if (bit != 0 && bit != 1) {
    mixreg::fail(mixreg::ErrorCode::parameter, std::string(name) + " must be 0 or 1");
  }
  return mixreg::to_regime(bit);
}

mixreg::Token to_token_checked(int bit, const char* name) {
  return static_cast<mixreg::Token>(mixreg::to_bit(to_regime_checked(bit, name)));
}

std::vector<mixreg::Token> to_tokens(const uint8_t* tokens, size_t n) {
  std::vector<mixreg::Token> out(tokens, tokens + n);
  for (size_t i = 0; i < n; ++i) {
    if (out[i] > 1) {
      mixreg::fail(mixreg::ErrorCode::parameter,
                   "token at position " + std::to_string(i + 1) + " is not 0 or 1", i + 1);
    }
  }
  return out;
}

template <typename F>
mixreg_status scalar(double* out, F&& f) {
  MIXREG_REQUIRE(out);
  return guarded([&] { *out = f(); });
}

const char* empty_if_null(const std::string* s) { return s ? s->c_str() : ""; }

}  // namespace

extern "C" {

const char* mixreg_version(void) { return mixreg::kVersion; }

const char* mixreg_status_string(mixreg_status status) {
  switch (status) {
    case MIXREG_OK: return "ok";
    case MIXREG_ERR_PARAMETER: return "parameter error";
    case MIXREG_ERR_IMPOSSIBLE_OBSERVATION: return "impossible observation";
    case MIXREG_ERR_IMPOSSIBLE_EVIDENCE: return "impossible evidence";
    case MIXREG_ERR_SIZE: return "size error";
    case MIXREG_ERR_PRECONDITION: return "precondition error";
    case MIXREG_ERR_PARSE: return "parse error";
    case MIXREG_ERR_IO: return "i/o error";
    case MIXREG_ERR_NULL_ARGUMENT: return "null argument";
    case MIXREG_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* mixreg_last_error(void) { return g_last_error.c_str(); }
size_t mixreg_last_error_position(void) { return g_last_position; }

// ---- process ----------------------------------------------------------------

mixreg_status mixreg_params_check(const mixreg_params* params) {
  MIXREG_REQUIRE(params);
  return guarded([&] { (void)to_params(*params); });
}

mixreg_status mixreg_transition_matrix(double rho, double out[4]) {
  MIXREG_REQUIRE(out);
  return guarded([&] {
    const auto m = mixreg::transition_matrix(rho);
    out[0] = m[0][0];
    out[1] = m[0][1];
    out[2] = m[1][0];
    out[3] = m[1][1];
  });
}

mixreg_status mixreg_emission_prob(int regime, int prev_token, int token, double* out) {
  return scalar(out, [&] {
    return mixreg::emission_prob(to_regime_checked(regime, "regime"),
                                 to_token_checked(prev_token, "prev_token"),
                                 to_token_checked(token, "token"));
  });
}

uint64_t mixreg_derive_seed(uint64_t master, uint64_t index) {
  return mixreg::derive_seed(master, index);
}

mixreg_status mixreg_trajectory_sample(const mixreg_params* params, size_t length,
                                       uint64_t seed, int with_signals,
                                       mixreg_trajectory** out) {
  MIXREG_REQUIRE(params);
  MIXREG_REQUIRE(out);
  return guarded([&] {
    const auto p = to_params(*params);
    auto t = mixreg::sample_trajectory(p, length, seed, with_signals != 0);
    auto handle = std::make_unique<mixreg_trajectory>(mixreg_trajectory{std::move(t), p, {}});
    handle->jsonl = mixreg::to_jsonl(handle->trajectory, handle->params);
    *out = handle.release();
  });
}

mixreg_status mixreg_trajectory_parse_jsonl(const char* line, mixreg_trajectory** out) {
  MIXREG_REQUIRE(line);
  MIXREG_REQUIRE(out);
  return guarded([&] {
    auto parsed = mixreg::parse_jsonl(line);
    auto handle = std::make_unique<mixreg_trajectory>(
        mixreg_trajectory{std::move(parsed.trajectory), parsed.params, {}});
    handle->jsonl = mixreg::to_jsonl(handle->trajectory, handle->params);
    *out = handle.release();
  });
}

void mixreg_trajectory_free(mixreg_trajectory* trajectory) { delete trajectory; }

size_t mixreg_trajectory_length(const mixreg_trajectory* trajectory) {
  return trajectory ? trajectory->trajectory.size() : 0;
}

uint64_t mixreg_trajectory_seed(const mixreg_trajectory* trajectory) {
  return trajectory ? trajectory->trajectory.seed : 0;
}

int mixreg_trajectory_has_signals(const mixreg_trajectory* trajectory) {
  return trajectory && trajectory->trajectory.signals ? 1 : 0;
}

mixreg_status mixreg_trajectory_params(const mixreg_trajectory* trajectory, mixreg_params* out) {
  MIXREG_REQUIRE(trajectory);
  MIXREG_REQUIRE(out);
  out->rho = trajectory->params.rho();
  out->pi_init = trajectory->params.pi_init();
  out->gamma = trajectory->params.gamma();
  return MIXREG_OK;
}

mixreg_status mixreg_trajectory_tokens(const mixreg_trajectory* trajectory, uint8_t* out,
                                       size_t capacity) {
  MIXREG_REQUIRE(trajectory);
  MIXREG_REQUIRE(out);
  const auto& tokens = trajectory->trajectory.tokens;
  if (capacity < tokens.size()) return set_error(MIXREG_ERR_SIZE, "token buffer too small");
  std::copy(tokens.begin(), tokens.end(), out);
  return MIXREG_OK;
}

namespace {

mixreg_status copy_regimes(const std::vector<mixreg::Regime>& regimes, uint8_t* out,
                           size_t capacity) {
  if (capacity < regimes.size()) return set_error(MIXREG_ERR_SIZE, "regime buffer too small");
  for (size_t i = 0; i < regimes.size(); ++i) {
    out[i] = static_cast<uint8_t>(mixreg::to_bit(regimes[i]));
  }
  return MIXREG_OK;
}

}  // namespace

mixreg_status mixreg_trajectory_regimes(const mixreg_trajectory* trajectory, uint8_t* out,
                                        size_t capacity) {
  MIXREG_REQUIRE(trajectory);
  MIXREG_REQUIRE(out);
  return copy_regimes(trajectory->trajectory.regimes, out, capacity);
}

mixreg_status mixreg_trajectory_signals(const mixreg_trajectory* trajectory, uint8_t* out,
                                        size_t capacity) {
  MIXREG_REQUIRE(trajectory);
  MIXREG_REQUIRE(out);
  if (!trajectory->trajectory.signals) {
    return set_error(MIXREG_ERR_PRECONDITION, "trajectory was sampled without signals");
  }
  return copy_regimes(*trajectory->trajectory.signals, out, capacity);
}

const char* mixreg_trajectory_jsonl(const mixreg_trajectory* trajectory) {
  return trajectory ? trajectory->jsonl.c_str() : "";
}

// ---- filter -------------------------------------------------------------------

mixreg_status mixreg_filter_step(const mixreg_params* params, double pi0, int prev_token,
                                 int token, double* out) {
  MIXREG_REQUIRE(params);
  return scalar(out, [&] {
    mixreg::require_in_closed(pi0, 0.0, 1.0, "pi0");
    return mixreg::filter_step({pi0, 1}, to_token_checked(prev_token, "prev_token"),
                               to_token_checked(token, "token"), to_params(*params))
        .pi0;
  });
}

mixreg_status mixreg_filter_prefix(const mixreg_params* params, const uint8_t* tokens, size_t n,
                                   double* pi0_out) {
  MIXREG_REQUIRE(params);
  MIXREG_REQUIRE(tokens);
  MIXREG_REQUIRE(pi0_out);
  return guarded([&] {
    const auto states = mixreg::filter_prefix(to_params(*params), to_tokens(tokens, n));
    for (size_t i = 0; i < states.size(); ++i) pi0_out[i] = states[i].pi0;
  });
}

mixreg_status mixreg_brute_force_posterior(const mixreg_params* params, const uint8_t* tokens,
                                           size_t n, double* out) {
  MIXREG_REQUIRE(params);
  MIXREG_REQUIRE(tokens);
  return scalar(out, [&] {
    return mixreg::brute_force_posterior(to_params(*params), to_tokens(tokens, n)).pi0;
  });
}

mixreg_status mixreg_oracle_check(size_t max_length, const double* rhos, size_t n_rhos,
                                  const double* pi_inits, size_t n_pi_inits,
                                  double* max_deviation, size_t* prefixes_compared) {
  MIXREG_REQUIRE(rhos);
  MIXREG_REQUIRE(pi_inits);
  MIXREG_REQUIRE(max_deviation);
  return guarded([&] {
    const auto r = mixreg::oracle_check(max_length, std::span(rhos, n_rhos),
                                        std::span(pi_inits, n_pi_inits));
    *max_deviation = r.max_deviation;
    if (prefixes_compared) *prefixes_compared = r.prefixes_compared;
  });
}

// ---- predictor ----------------------------------------------------------------

mixreg_status mixreg_marginal_predictive(double pi0, double* p_alt) {
  return scalar(p_alt, [&] { return mixreg::marginal_predictive(pi0).p_alt; });
}

mixreg_status mixreg_temperature_scale(double p_alt, double temperature, double* out) {
  return scalar(out, [&] { return mixreg::temperature_scale({p_alt}, temperature).p_alt; });
}

mixreg_status mixreg_structural_error_prob(double alpha, double temperature, double* out) {
  return scalar(out, [&] { return mixreg::structural_error_prob(alpha, temperature); });
}

mixreg_status mixreg_grounded_posterior(double pi0, double gamma, int signal, double* out) {
  return scalar(out, [&] {
    return mixreg::grounded_posterior(pi0, gamma, to_regime_checked(signal, "signal"));
  });
}

mixreg_status mixreg_augmented_predictive(double pi0, double gamma, int signal, int aware,
                                          double* p_alt) {
  return scalar(p_alt, [&] {
    return mixreg::augmented_predictive(pi0, gamma, to_regime_checked(signal, "signal"),
                                        aware != 0)
        .p_alt;
  });
}

mixreg_status mixreg_dominance_threshold(double pi0, double* out) {
  return scalar(out, [&] { return mixreg::dominance_threshold(pi0); });
}

// ---- information theory -------------------------------------------------------

mixreg_status mixreg_binary_entropy(double p, double* out) {
  return scalar(out, [&] { return mixreg::binary_entropy(p); });
}

mixreg_status mixreg_mixture_entropy(double pi0, double* out) {
  return scalar(out, [&] { return mixreg::mixture_entropy(pi0); });
}

mixreg_status mixreg_sufficiency_gap(double pi0, mixreg_entropy_report* out) {
  MIXREG_REQUIRE(out);
  return guarded([&] {
    const auto r = mixreg::sufficiency_gap(pi0);
    *out = {r.h_marginal, r.h_true_conditional, r.gap, r.pi0};
  });
}

mixreg_status mixreg_pointwise_mutual_info(double pi0, double* out) {
  return scalar(out, [&] { return mixreg::pointwise_mutual_info(pi0); });
}

mixreg_status mixreg_expected_residual_mi(double pi0, double gamma, double* out) {
  return scalar(out, [&] { return mixreg::expected_residual_mi(pi0, gamma); });
}

mixreg_status mixreg_entropy_after_grounding(double pi0, double gamma, double* out) {
  return scalar(out, [&] { return mixreg::entropy_after_grounding(pi0, gamma); });
}

mixreg_status mixreg_internal_entropy(double pi0, double* out) {
  return scalar(out, [&] { return mixreg::internal_entropy(pi0); });
}

// ---- decision -----------------------------------------------------------------

mixreg_status mixreg_loss_create(const double* entries, size_t n_actions, mixreg_loss** out) {
  MIXREG_REQUIRE(entries);
  MIXREG_REQUIRE(out);
  return guarded([&] {
    std::vector<mixreg::LossMatrix::Row> rows(n_actions);
    for (size_t a = 0; a < n_actions; ++a) rows[a] = {entries[2 * a], entries[2 * a + 1]};
    *out = new mixreg_loss{mixreg::LossMatrix(std::move(rows))};
  });
}

mixreg_status mixreg_loss_from_json(const char* json, mixreg_loss** out) {
  MIXREG_REQUIRE(json);
  MIXREG_REQUIRE(out);
  return guarded([&] { *out = new mixreg_loss{mixreg::LossMatrix::from_json(json)}; });
}

void mixreg_loss_free(mixreg_loss* loss) { delete loss; }

size_t mixreg_loss_actions(const mixreg_loss* loss) { return loss ? loss->matrix.actions() : 0; }

mixreg_status mixreg_expected_loss(double pi0, const mixreg_loss* loss, size_t action,
                                   double* out) {
  MIXREG_REQUIRE(loss);
  return scalar(out, [&] { return mixreg::expected_loss(pi0, loss->matrix, action); });
}

mixreg_status mixreg_bayes_action(double pi0, const mixreg_loss* loss, size_t* out) {
  MIXREG_REQUIRE(loss);
  MIXREG_REQUIRE(out);
  return guarded([&] { *out = mixreg::bayes_action(pi0, loss->matrix); });
}

mixreg_status mixreg_decision_regret(double pi0_textonly, double pi0_informed,
                                     const mixreg_loss* loss, double* out) {
  MIXREG_REQUIRE(loss);
  return scalar(out, [&] {
    return mixreg::decision_regret(pi0_textonly, pi0_informed, loss->matrix);
  });
}

// ---- tables -------------------------------------------------------------------

mixreg_status mixreg_filter_trace(const mixreg_params* params, const char* tokens,
                                  mixreg_table** out) {
  MIXREG_REQUIRE(params);
  MIXREG_REQUIRE(tokens);
  MIXREG_REQUIRE(out);
  return guarded([&] {
    const auto p = to_params(*params);
    const auto parsed = mixreg::parse_token_string(tokens);
    auto table = mixreg::filter_trace_table(p, parsed);
    nlohmann::ordered_json config;
    config["tokens"] = tokens;
    config["rho"] = p.rho();
    config["pi_init"] = p.pi_init();
    auto csv = table.to_csv();
    *out = new mixreg_table{std::move(table), std::move(csv), config.dump()};
  });
}

mixreg_status mixreg_sweep(const char* spec_json, mixreg_table** out) {
  MIXREG_REQUIRE(spec_json);
  MIXREG_REQUIRE(out);
  return guarded([&] {
    const auto spec = mixreg::SweepSpec::from_json(spec_json).resolved();
    auto table = mixreg::sweep_table(spec);
    auto csv = table.to_csv();
    *out = new mixreg_table{std::move(table), std::move(csv), spec.to_json()};
  });
}

void mixreg_table_free(mixreg_table* table) { delete table; }

size_t mixreg_table_rows(const mixreg_table* table) {
  return table ? table->table.rows().size() : 0;
}

const char* mixreg_table_csv(const mixreg_table* table) { return table ? table->csv.c_str() : ""; }

const char* mixreg_table_config(const mixreg_table* table) {
  return table ? table->config.c_str() : "";
}

// ---- experiments --------------------------------------------------------------

mixreg_status mixreg_experiment_create(const char* kind, const char* config_json,
                                       mixreg_experiment** out) {
  MIXREG_REQUIRE(kind);
  MIXREG_REQUIRE(out);
  return guarded([&] {
    const auto k = mixreg::parse_experiment_kind(kind);
    if (!k) {
      mixreg::fail(mixreg::ErrorCode::parameter, std::string("unknown experiment '") + kind + "'");
    }
    auto config = mixreg::ExperimentConfig::from_json(config_json ? config_json : "");
    auto handle = std::make_unique<mixreg_experiment>();
    handle->kind = *k;
    handle->config_json = config.to_json(*k);
    handle->config = std::move(config);
    *out = handle.release();
  });
}

void mixreg_experiment_free(mixreg_experiment* experiment) { delete experiment; }

const char* mixreg_experiment_config(const mixreg_experiment* experiment) {
  return experiment ? experiment->config_json.c_str() : "";
}

mixreg_status mixreg_experiment_run(mixreg_experiment* experiment) {
  MIXREG_REQUIRE(experiment);
  return guarded([&] {
    auto result = mixreg::run_experiment(experiment->kind, experiment->config);
    experiment->csv = result.to_csv();
    experiment->jsonl = result.to_jsonl();
    experiment->failures.clear();
    for (const auto& f : result.failures) {
      experiment->failures += f;
      experiment->failures += '\n';
    }
    experiment->result = std::move(result);
  });
}

int mixreg_experiment_passed(const mixreg_experiment* experiment) {
  if (!experiment || !experiment->result) return -1;
  return experiment->result->all_passed() ? 1 : 0;
}

size_t mixreg_experiment_record_count(const mixreg_experiment* experiment) {
  return experiment && experiment->result ? experiment->result->records.size() : 0;
}

const char* mixreg_experiment_csv(const mixreg_experiment* experiment) {
  return empty_if_null(experiment ? &experiment->csv : nullptr);
}

const char* mixreg_experiment_jsonl(const mixreg_experiment* experiment) {
  return empty_if_null(experiment ? &experiment->jsonl : nullptr);
}

const char* mixreg_experiment_failures(const mixreg_experiment* experiment) {
  return empty_if_null(experiment ? &experiment->failures : nullptr);
}

}  // extern "C"
