#ifndef CBSIGNAL_H
#define CBSIGNAL_H

/* C interface to the rate-signaling toolkit.
 *
 * Every entry point that can fail returns a cbs_status; outputs are written
 * through caller-provided pointers only on CBS_OK. After a failure,
 * cbs_last_error_message() returns a thread-local description valid until the
 * next call on the same thread. Handles are opaque and must be released with
 * the matching *_destroy call. All functions are thread-safe as long as each
 * handle is used by one thread at a time.
 */

#include <stdint.h>

#if defined(_WIN32)
#define CBS_API __declspec(dllexport)
#else
#define CBS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cbs_status {
  CBS_OK = 0,
  CBS_INVALID_ARGUMENT = 1, /* parameter outside its documented domain */
  CBS_INFEASIBLE = 2,       /* requested object does not exist at these parameters */
  CBS_NUMERICAL = 3,        /* a numerical routine failed its own guards */
  CBS_NULL_POINTER = 4,
  CBS_BUFFER_TOO_SMALL = 5
} cbs_status;

typedef enum cbs_profile_kind {
  CBS_PROFILE_COMPETITIVE = 0,          /* unbiased price takers, full revelation */
  CBS_PROFILE_OLIGOPOLY_TRANSPARENT = 1,/* strategic investors, transparent disclosure */
  CBS_PROFILE_OLIGOPOLY_CHEAP_TALK = 2  /* strategic investors, partition messaging */
} cbs_profile_kind;

typedef enum cbs_delegation_mode {
  CBS_DELEGATION_TRANSPARENT = 0,
  CBS_DELEGATION_CHEAP_TALK = 1
} cbs_delegation_mode;

typedef enum cbs_trigger_kind {
  CBS_TRIGGER_DISCIPLINE = 0,
  CBS_TRIGGER_COLLUSION_FIRST_BEST = 1,
  CBS_TRIGGER_COLLUSION_MONOPOLY = 2
} cbs_trigger_kind;

typedef struct cbs_game cbs_game;           /* immutable parameter bundle */
typedef struct cbs_partition cbs_partition; /* solved messaging partition */

/* ---- library identity ---------------------------------------------------- */

CBS_API const char* cbs_version(void);
CBS_API const char* cbs_rng_algorithm(void); /* the only generator the library runs */
CBS_API const char* cbs_status_name(cbs_status status);
CBS_API const char* cbs_last_error_message(void);

/* ---- parameters ----------------------------------------------------------
 * alpha in (0,1), beta >= 0, n_investors >= 1, phi1 > 0, phi2 > 0.
 * Banker weights alpha_tilde live in [0,1). */

CBS_API cbs_status cbs_game_create(double alpha, double beta, int n_investors,
                                   double phi1, double phi2, cbs_game** out_game);
CBS_API void cbs_game_destroy(cbs_game* game);

/* ---- stage primitives (parameter-free of the handle) --------------------- */

CBS_API cbs_status cbs_investor_payoff(double position, double rate, double beta,
                                       double* out);
CBS_API cbs_status cbs_cb_loss(const double* positions, int n_positions, double rate,
                               double omega, double alpha_tilde, double* out);
CBS_API cbs_status cbs_policy_rule(double omega, double mean_position,
                                   double alpha_tilde, double* out);
/* Slope of the rate in the late shock; requires 0 < alpha_tilde < 1 so the
 * strict under-reaction inequalities hold. */
CBS_API cbs_status cbs_underreaction_slope(double alpha_tilde, double* out);

/* ---- one-shot equilibrium objects ----------------------------------------- */

CBS_API cbs_status cbs_investment_bias(const cbs_game* game, double alpha_tilde,
                                       double* out);
CBS_API cbs_status cbs_best_response_investment(const cbs_game* game, double alpha_tilde,
                                                double expected_omega1,
                                                double mean_other_positions, double* out);
/* out_terms: unbiased, readjustment, distortion components of the expected
 * investor utility on the transparent path. */
CBS_API cbs_status cbs_utility_decomposition(const cbs_game* game, double alpha_tilde,
                                             double out_terms[3]);
/* Realized rate when shocks hit and everyone follows the stated profile.
 * alpha_tilde is ignored for the competitive profile. */
CBS_API cbs_status cbs_on_path_rate(const cbs_game* game, cbs_profile_kind profile,
                                    double alpha_tilde, double omega1, double omega2,
                                    double* out);

/* One-call static solution summary at a banker weight. p_bar is -1 and
 * p_bar_unbounded nonzero in the fully revealing regime. */
typedef struct cbs_solve_summary {
  double investment_bias;
  int64_t p_bar;
  int p_bar_unbounded;
  double residual_variance; /* most informative supportable partition */
  double mean_distortion;   /* expected rate minus competitive benchmark */
  double underreaction_slope;
} cbs_solve_summary;

CBS_API cbs_status cbs_solve(const cbs_game* game, double alpha_tilde,
                             cbs_solve_summary* out);

/* ---- partition communication ---------------------------------------------- */

/* Largest supportable cell count. *out_unbounded is nonzero (and *out_cells is
 * -1) when every finite partition is supportable. */
CBS_API cbs_status cbs_max_partitions(const cbs_game* game, double alpha_tilde,
                                      int64_t* out_cells, int* out_unbounded);

/* cells >= 1 solves that partition (CBS_INFEASIBLE above the supportable
 * count); cells == 0 solves the most informative one (CBS_INFEASIBLE in the
 * fully revealing regime or when it is too fine to materialize). */
CBS_API cbs_status cbs_solve_partition(const cbs_game* game, double alpha_tilde,
                                       int cells, cbs_partition** out_partition);
CBS_API void cbs_partition_destroy(cbs_partition* partition);

CBS_API cbs_status cbs_partition_cells(const cbs_partition* partition, int* out_cells);
CBS_API cbs_status cbs_partition_cutoff_count(const cbs_partition* partition,
                                              int* out_count);
/* Copies the increasing cutoffs into buffer. On CBS_BUFFER_TOO_SMALL,
 * *out_count holds the required capacity. */
CBS_API cbs_status cbs_partition_cutoffs(const cbs_partition* partition, double* buffer,
                                         int capacity, int* out_count);
CBS_API cbs_status cbs_partition_residual_variance(const cbs_partition* partition,
                                                   double* out);
/* Maximum violation of the boundary indifference conditions, in the sender's
 * reduced squared-gap units. The partition must come from the same game. */
CBS_API cbs_status cbs_verify_partition(const cbs_game* game,
                                        const cbs_partition* partition,
                                        double alpha_tilde, double* out_max_violation);

/* ---- welfare --------------------------------------------------------------- */

typedef struct cbs_welfare_report {
  double welfare;           /* minus society's expected loss */
  double investor_payoff;   /* ex-ante expected utility of one investor */
  double mean_distortion;   /* expected rate shift against the benchmark */
  double residual_variance; /* information lost to coarse messaging */
} cbs_welfare_report;

/* alpha_tilde is ignored for the competitive profile. */
CBS_API cbs_status cbs_welfare_report_for(const cbs_game* game, cbs_profile_kind profile,
                                          double alpha_tilde, cbs_welfare_report* out);

/* ---- delegation ------------------------------------------------------------- */

typedef struct cbs_delegation_solution {
  cbs_delegation_mode mode;
  double alpha_tilde_star; /* optimal banker weight in [0, alpha] */
  double society_welfare;
  double market_payoff;
} cbs_delegation_solution;

CBS_API cbs_status cbs_optimal_banker(const cbs_game* game, cbs_delegation_mode mode,
                                      cbs_delegation_solution* out);

/* Single-investor market (requires n_investors == 1): unbiased banker who can
 * only babble versus a weight-zero banker who reveals fully. */
typedef struct cbs_babbling_monopoly_report {
  double ratio; /* alpha beta / (1-alpha)^2 */
  int babbles_under_unbiased;
  double eu_unbiased;
  double eu_kitish;
  int kitish_preferred;
  double condition_lhs;
  double condition_rhs;
} cbs_babbling_monopoly_report;

CBS_API cbs_status cbs_babbling_monopoly_check(const cbs_game* game,
                                               cbs_babbling_monopoly_report* out);

/* ---- comparative statics ------------------------------------------------------ */

#define CBS_SCAN_COLUMNS 8

typedef struct cbs_scan_row {
  double grid_value;
  double bias;
  int64_t p_bar; /* -1 in the fully revealing regime */
  double residual_variance;
  double w_competitive;
  double w_transparent;
  double w_cheap_talk;
  double alpha_tilde_tr;
  double alpha_tilde_ct;
} cbs_scan_row;

/* Sweeps `dimension` ("alpha", "beta", "n_investors" or "N", "phi1", "phi2")
 * over grid[0..n_grid), holding the other parameters at the game's values.
 * rows_out must hold n_grid entries; mono_flags_out receives one monotonicity
 * flag per scanned column (decode with cbs_monotonicity_name). */
CBS_API cbs_status cbs_comparative_statics_scan(const cbs_game* game,
                                                const char* dimension,
                                                const double* grid, int n_grid,
                                                cbs_scan_row* rows_out,
                                                int mono_flags_out[CBS_SCAN_COLUMNS]);

/* Canonical name of a scan dimension alias, or NULL when unknown. */
CBS_API const char* cbs_scan_dimension_canonical(const char* name);
CBS_API const char* cbs_scan_column_name(int column);      /* NULL out of range */
CBS_API const char* cbs_monotonicity_name(int flag);       /* NULL out of range */

/* ---- repeated interaction ------------------------------------------------------ */

typedef struct cbs_trigger_equilibrium {
  cbs_trigger_kind kind;
  int feasible;
  double delta_star; /* NaN when infeasible */
  double path_stage_payoff;
  double punish_stage_payoff;
  double one_shot_gain;
} cbs_trigger_equilibrium;

CBS_API cbs_status cbs_trigger_threshold(const cbs_game* game, cbs_trigger_kind kind,
                                         cbs_trigger_equilibrium* out);
/* Discipline is feasible exactly when phi1 strictly exceeds this bound. */
CBS_API cbs_status cbs_discipline_phi1_bound(const cbs_game* game, double* out);
/* Cheap-talk reversion deters deviations exactly when the static residual
 * variance strictly exceeds this floor. */
CBS_API cbs_status cbs_collusion_variance_bound(const cbs_game* game, double* out);

typedef struct cbs_preference_report {
  int monopoly_preferred;   /* strict; both zero on the knife edge */
  int first_best_preferred;
  double first_best_stage_payoff;
  double monopoly_stage_payoff;
  double sigma_hat_monopoly;
  double threshold;
} cbs_preference_report;

CBS_API cbs_status cbs_investor_equilibrium_preference(const cbs_game* game,
                                                       cbs_preference_report* out);

/* ---- simulation ------------------------------------------------------------------ */

typedef struct cbs_mc_estimate {
  double mean;
  double std_error;
  int64_t replications;
  uint64_t seed;
  char algorithm[64];
} cbs_mc_estimate;

/* Draws both shocks per replication, plays the stated profile and records
 * society welfare and one investor's payoff. Identical output for any
 * worker count (workers <= 0 picks the hardware count). */
CBS_API cbs_status cbs_run_monte_carlo(const cbs_game* game, cbs_profile_kind profile,
                                       double alpha_tilde, int64_t replications,
                                       uint64_t seed, int workers,
                                       cbs_mc_estimate* out_welfare,
                                       cbs_mc_estimate* out_investor_payoff);

typedef struct cbs_trigger_stream_result {
  cbs_mc_estimate no_deviation;
  cbs_mc_estimate with_deviation;
  cbs_mc_estimate net_gain; /* paired: with minus without, same draws */
  double delta;
  int64_t horizon;
} cbs_trigger_stream_result;

/* Discounted investor payoff streams under the trigger strategy.
 * deviate_at < 0 plays the path forever; horizon 0 picks the minimal horizon
 * whose discount tail is below 1e-10. */
CBS_API cbs_status cbs_simulate_trigger_path(const cbs_game* game, cbs_trigger_kind kind,
                                             double delta, int64_t deviate_at,
                                             int64_t horizon, int64_t replications,
                                             uint64_t seed, int workers,
                                             cbs_trigger_stream_result* out);

/* Simulation-only estimate of the critical discount factor (CBS_INFEASIBLE
 * when no delta up to 0.99 deters the deviation). */
CBS_API cbs_status cbs_trigger_bisection(const cbs_game* game, cbs_trigger_kind kind,
                                         int64_t replications, uint64_t seed, double tol,
                                         int workers, double* out_delta);

/* ---- numeric certification oracles ------------------------------------------------ */

/* Best one-shot gain from repositioning against the stated profile; zero up
 * to tolerance certifies position optimality. */
CBS_API cbs_status cbs_deviation_oracle_investment(const cbs_game* game,
                                                   cbs_profile_kind profile,
                                                   double alpha_tilde, double* out_gain);
/* Best reduction in the policymaker's expected continuation loss from
 * off-profile messaging, maximized over sampled early-shock states. */
CBS_API cbs_status cbs_deviation_oracle_message(const cbs_game* game,
                                                cbs_profile_kind profile,
                                                double alpha_tilde, int state_samples,
                                                uint64_t seed, double* out_gain);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CBSIGNAL_H */
