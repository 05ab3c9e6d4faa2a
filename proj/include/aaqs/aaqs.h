#ifndef AAQS_H
#define AAQS_H

/* C interface for the quasi-sum aggregation library.
 *
 * Every function returns an aaqs_status; outputs are written through pointer
 * arguments only on AAQS_OK. On failure, aaqs_last_error_message() returns a
 * thread-local description of what went wrong. Strings returned through
 * char** are heap-allocated and must be released with aaqs_string_free().
 *
 * The aaqs_* operation entry points take a JSON configuration string; the
 * accepted keys are documented per function. Results come back as JSON with
 * deterministic key order; infinities are encoded as the strings "inf" and
 * "-inf".
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum aaqs_status {
    AAQS_OK = 0,
    AAQS_ERR_INVALID_ARGUMENT = 1, /* bad config value, key, or shape */
    AAQS_ERR_DOMAIN = 2,           /* numeric input outside the domain */
    AAQS_ERR_STATE = 3,            /* run reached an unusable state */
    AAQS_ERR_IO = 4,               /* file missing or malformed */
    AAQS_ERR_INTERNAL = 5
} aaqs_status;

const char* aaqs_status_name(aaqs_status s);
const char* aaqs_last_error_message(void);
void aaqs_string_free(char* s);

/* ---- generators ------------------------------------------------------- */

/* Keys: "sum", "sqrt", "square", "pow10", "focal", "pow:<p>" with p > 0. */
typedef struct aaqs_generator aaqs_generator;

aaqs_status aaqs_generator_create(const char* key, aaqs_generator** out);
void aaqs_generator_destroy(aaqs_generator* gen);
aaqs_status aaqs_generator_u(const aaqs_generator* gen, double x, double* out);
aaqs_status aaqs_generator_u_inv(const aaqs_generator* gen, double y, double* out);

/* u_inv(sum of u(x_i)); *overflow is set to 1 when a finite input pushed u
 * past the cap and the value saturated to +inf. */
aaqs_status aaqs_generator_quasi_sum(const aaqs_generator* gen, const double* xs, size_t n,
                                     double* value, int* overflow);
aaqs_status aaqs_generator_fold(const aaqs_generator* gen, double acc, double x, double* value,
                                int* overflow);

/* ---- traces ----------------------------------------------------------- */

typedef struct aaqs_trace aaqs_trace;

aaqs_status aaqs_trace_load(const char* path, aaqs_trace** out);
aaqs_status aaqs_trace_save(const aaqs_trace* trace, const char* path);
void aaqs_trace_destroy(aaqs_trace* trace);
int aaqs_trace_rounds(const aaqs_trace* trace);
int aaqs_trace_num_experts(const aaqs_trace* trace);
int aaqs_trace_num_outcomes(const aaqs_trace* trace);
aaqs_status aaqs_trace_learner_loss(const aaqs_trace* trace, int round, double* out);
aaqs_status aaqs_trace_expert_loss(const aaqs_trace* trace, int round, int expert, double* out);

/* ---- operations ------------------------------------------------------- */

/* Seeded run with random experts and outcomes.
 * Config: generator, eta, loss ("log"|"brier"), outcomes, experts, rounds,
 * seed, resolution, substitution ("auto"|"exact"|"minimax"), bound_tol,
 * trace_out (optional path).
 * Result: config echo, bound report, pseudo-loss identity report,
 * grid_error. */
aaqs_status aaqs_run_synthetic(const char* config_json, char** out_json);

/* Regret bounds of a saved trace.
 * Config: trace (path), generator, eta, c (optional, default 1), tol.
 * Result: bound report plus the pseudo-loss identity report. */
aaqs_status aaqs_check_bounds(const char* config_json, char** out_json);

/* Mixability-constant estimate with the restated-game cross-check.
 * Config: generator, eta, loss, outcomes, resolution, psi_resolution
 * (optional), depth, weight_steps, refine, tol. */
aaqs_status aaqs_estimate_mixability(const char* config_json, char** out_json);

/* Generator axiom suite.
 * Config: generator, grid (optional array), triples, seed. */
aaqs_status aaqs_check_axioms(const char* config_json, char** out_json);

/* One global prediction game.
 * Config: generator, eta, loss, outcomes, experts, rounds, c, a,
 * environment ("random"|"greedy"|"replay"), seed, move_resolution,
 * transcript (path, for replay), transcript_out (optional path), tol. */
aaqs_status aaqs_play_global_game(const char* config_json, char** out_json);

/* Win/lose matrix over a (c, a) grid, one fresh game per cell.
 * Config: as aaqs_play_global_game minus c/a, plus c_values, a_values. */
aaqs_status aaqs_frontier_scan(const char* config_json, char** out_json);

/* Station pipeline: clean, label, split, run every configured aggregation,
 * write histograms and a summary.
 * Config: station_file, out_dir, precip_mm, sunshine_h, train_fraction,
 * grid_steps, mix_psi_steps, mix_weight_steps, laplace_alpha, bound_tol,
 * expert_csv (optional), runs (optional [{generator, eta}]), write_traces. */
aaqs_status aaqs_run_weather(const char* config_json, char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* AAQS_H */
