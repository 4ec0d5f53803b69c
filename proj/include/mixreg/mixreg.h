/*
 * mixreg C API.
 *
 * Every fallible call returns a mixreg_status. On failure a message (and, for
 * token errors, a 1-based position) is stored per thread and can be read back
 * with mixreg_last_error() / mixreg_last_error_position(). Output pointers are
 * left untouched on failure.
 *
 * Handles are opaque and owned by the caller; free each with its matching
 * *_free function (passing NULL is allowed). Strings returned by accessor
 * functions are owned by the handle and stay valid until it is freed.
 *
 * Regimes and signals are passed as ints: 0 = alternating, 1 = random.
 */
#ifndef MIXREG_H
#define MIXREG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MIXREG_BUILDING)
#    define MIXREG_API __declspec(dllexport)
#  else
#    define MIXREG_API __declspec(dllimport)
#  endif
#else
#  define MIXREG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mixreg_status {
  MIXREG_OK = 0,
  MIXREG_ERR_PARAMETER = 1,
  MIXREG_ERR_IMPOSSIBLE_OBSERVATION = 2,
  MIXREG_ERR_IMPOSSIBLE_EVIDENCE = 3,
  MIXREG_ERR_SIZE = 4,
  MIXREG_ERR_PRECONDITION = 5,
  MIXREG_ERR_PARSE = 6,
  MIXREG_ERR_IO = 7,
  MIXREG_ERR_NULL_ARGUMENT = 8,
  MIXREG_ERR_INTERNAL = 9
} mixreg_status;

MIXREG_API const char* mixreg_version(void);
MIXREG_API const char* mixreg_status_string(mixreg_status status);
MIXREG_API const char* mixreg_last_error(void);
MIXREG_API size_t mixreg_last_error_position(void);

/* ---- process ----------------------------------------------------------- */

typedef struct mixreg_params {
  double rho;     /* (1/2, 1) */
  double pi_init; /* [0, 1]   */
  double gamma;   /* [1/2, 1] */
} mixreg_params;

MIXREG_API mixreg_status mixreg_params_check(const mixreg_params* params);

/* Row-major: out = {T00, T01, T10, T11}. */
MIXREG_API mixreg_status mixreg_transition_matrix(double rho, double out[4]);
MIXREG_API mixreg_status mixreg_emission_prob(int regime, int prev_token,
                                              int token, double* out);
MIXREG_API uint64_t mixreg_derive_seed(uint64_t master, uint64_t index);

typedef struct mixreg_trajectory mixreg_trajectory;

MIXREG_API mixreg_status mixreg_trajectory_sample(const mixreg_params* params,
                                                  size_t length, uint64_t seed,
                                                  int with_signals,
                                                  mixreg_trajectory** out);
MIXREG_API mixreg_status mixreg_trajectory_parse_jsonl(const char* line,
                                                       mixreg_trajectory** out);
MIXREG_API void mixreg_trajectory_free(mixreg_trajectory* trajectory);

MIXREG_API size_t mixreg_trajectory_length(const mixreg_trajectory* trajectory);
MIXREG_API uint64_t mixreg_trajectory_seed(const mixreg_trajectory* trajectory);
MIXREG_API int mixreg_trajectory_has_signals(const mixreg_trajectory* trajectory);
MIXREG_API mixreg_status mixreg_trajectory_params(const mixreg_trajectory* trajectory,
                                                  mixreg_params* out);

/* Copy into caller buffers. tokens need length() slots; regimes and signals
 * need length() - 1. A short buffer yields MIXREG_ERR_SIZE. */
MIXREG_API mixreg_status mixreg_trajectory_tokens(const mixreg_trajectory* trajectory,
                                                  uint8_t* out, size_t capacity);
MIXREG_API mixreg_status mixreg_trajectory_regimes(const mixreg_trajectory* trajectory,
                                                   uint8_t* out, size_t capacity);
MIXREG_API mixreg_status mixreg_trajectory_signals(const mixreg_trajectory* trajectory,
                                                   uint8_t* out, size_t capacity);

/* One JSON-lines record, without the trailing newline. */
MIXREG_API const char* mixreg_trajectory_jsonl(const mixreg_trajectory* trajectory);

/* ---- filter ------------------------------------------------------------ */

MIXREG_API mixreg_status mixreg_filter_step(const mixreg_params* params, double pi0,
                                            int prev_token, int token, double* out);

/* pi0_out receives n values; element i conditions on tokens[0..i]. */
MIXREG_API mixreg_status mixreg_filter_prefix(const mixreg_params* params,
                                              const uint8_t* tokens, size_t n,
                                              double* pi0_out);

/* n <= 20. */
MIXREG_API mixreg_status mixreg_brute_force_posterior(const mixreg_params* params,
                                                      const uint8_t* tokens, size_t n,
                                                      double* out);

MIXREG_API mixreg_status mixreg_oracle_check(size_t max_length, const double* rhos,
                                             size_t n_rhos, const double* pi_inits,
                                             size_t n_pi_inits, double* max_deviation,
                                             size_t* prefixes_compared);

/* ---- predictor --------------------------------------------------------- */

MIXREG_API mixreg_status mixreg_marginal_predictive(double pi0, double* p_alt);
MIXREG_API mixreg_status mixreg_temperature_scale(double p_alt, double temperature,
                                                  double* out);
MIXREG_API mixreg_status mixreg_structural_error_prob(double alpha, double temperature,
                                                      double* out);
MIXREG_API mixreg_status mixreg_grounded_posterior(double pi0, double gamma, int signal,
                                                   double* out);
MIXREG_API mixreg_status mixreg_augmented_predictive(double pi0, double gamma,
                                                     int signal, int aware,
                                                     double* p_alt);
MIXREG_API mixreg_status mixreg_dominance_threshold(double pi0, double* out);

/* ---- information theory (bits) ----------------------------------------- */

typedef struct mixreg_entropy_report {
  double h_marginal;
  double h_true_conditional;
  double gap;
  double pi0;
} mixreg_entropy_report;

MIXREG_API mixreg_status mixreg_binary_entropy(double p, double* out);
MIXREG_API mixreg_status mixreg_mixture_entropy(double pi0, double* out);
MIXREG_API mixreg_status mixreg_sufficiency_gap(double pi0, mixreg_entropy_report* out);
MIXREG_API mixreg_status mixreg_pointwise_mutual_info(double pi0, double* out);
MIXREG_API mixreg_status mixreg_expected_residual_mi(double pi0, double gamma,
                                                     double* out);
MIXREG_API mixreg_status mixreg_entropy_after_grounding(double pi0, double gamma,
                                                        double* out);
MIXREG_API mixreg_status mixreg_internal_entropy(double pi0, double* out);

/* ---- decision ---------------------------------------------------------- */

typedef struct mixreg_loss mixreg_loss;

/* entries: n_actions rows of {L(a,0), L(a,1)}, row-major. */
MIXREG_API mixreg_status mixreg_loss_create(const double* entries, size_t n_actions,
                                            mixreg_loss** out);
MIXREG_API mixreg_status mixreg_loss_from_json(const char* json, mixreg_loss** out);
MIXREG_API void mixreg_loss_free(mixreg_loss* loss);
MIXREG_API size_t mixreg_loss_actions(const mixreg_loss* loss);

MIXREG_API mixreg_status mixreg_expected_loss(double pi0, const mixreg_loss* loss,
                                              size_t action, double* out);
MIXREG_API mixreg_status mixreg_bayes_action(double pi0, const mixreg_loss* loss,
                                             size_t* out);
MIXREG_API mixreg_status mixreg_decision_regret(double pi0_textonly, double pi0_informed,
                                                const mixreg_loss* loss, double* out);

/* ---- tables ------------------------------------------------------------ */

typedef struct mixreg_table mixreg_table;

/* tokens: string over {'0','1'}. A bad character yields MIXREG_ERR_PARSE with
 * its position. */
MIXREG_API mixreg_status mixreg_filter_trace(const mixreg_params* params,
                                             const char* tokens, mixreg_table** out);

/* spec: JSON object with "kind" (gap | temperature | gamma | residual-mi) and
 * optional grids "pi0", "alpha", "temperature", "gamma". */
MIXREG_API mixreg_status mixreg_sweep(const char* spec_json, mixreg_table** out);

MIXREG_API void mixreg_table_free(mixreg_table* table);
MIXREG_API size_t mixreg_table_rows(const mixreg_table* table);
MIXREG_API const char* mixreg_table_csv(const mixreg_table* table);
/* Resolved inputs (all defaults materialized) as a JSON object. */
MIXREG_API const char* mixreg_table_config(const mixreg_table* table);

/* ---- experiments ------------------------------------------------------- */

typedef struct mixreg_experiment mixreg_experiment;

/* kind: calibration | false-authority | threshold | temperature.
 * config_json: flat JSON object, may be NULL or "{}" for all defaults. */
MIXREG_API mixreg_status mixreg_experiment_create(const char* kind,
                                                  const char* config_json,
                                                  mixreg_experiment** out);
MIXREG_API void mixreg_experiment_free(mixreg_experiment* experiment);
MIXREG_API const char* mixreg_experiment_config(const mixreg_experiment* experiment);
MIXREG_API mixreg_status mixreg_experiment_run(mixreg_experiment* experiment);

/* 1 if every check passed, 0 if any failed, -1 if not run yet. */
MIXREG_API int mixreg_experiment_passed(const mixreg_experiment* experiment);
MIXREG_API size_t mixreg_experiment_record_count(const mixreg_experiment* experiment);

/* Empty strings until the experiment has run. */
MIXREG_API const char* mixreg_experiment_csv(const mixreg_experiment* experiment);
MIXREG_API const char* mixreg_experiment_jsonl(const mixreg_experiment* experiment);
MIXREG_API const char* mixreg_experiment_failures(const mixreg_experiment* experiment);

#ifdef __cplusplus
}
#endif

#endif /* MIXREG_H */
