/* orlz: Orlicz norms, generating distributions, and Monte Carlo checks of
 * the norm equivalences they satisfy.
 *
 * Opaque-handle C interface over the C++ core. All functions return a
 * status code; outputs go through pointers. Handles are immutable after
 * creation and safe to share across threads. Strings returned via char**
 * are heap-allocated and must be released with orlz_string_free().
 */
#ifndef ORLZ_H
#define ORLZ_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define ORLZ_API __declspec(dllexport)
#else
#define ORLZ_API __attribute__((visibility("default")))
#endif

typedef struct orlz_orlicz orlz_orlicz;
typedef struct orlz_dist orlz_dist;

typedef int orlz_status;
enum {
  ORLZ_OK = 0,
  ORLZ_EINVAL = 1,  /* malformed input or bad arguments */
  ORLZ_EDOMAIN = 2, /* mathematical precondition violated */
  ORLZ_EFAIL = 3    /* internal failure */
};

/* Message for the most recent failing call on this thread. */
ORLZ_API const char* orlz_last_error(void);

ORLZ_API void orlz_string_free(char* s);

/* ---- Orlicz functions -------------------------------------------------- */

/* Document format: {"branches":[{"kind":"power"|"affine"|"table",
 * "domain":[lo,hi|null], ...params}], "kink": t1|null, "flags":{...}}. */
ORLZ_API orlz_status orlz_orlicz_from_json(const char* json,
                                           orlz_orlicz** out);
ORLZ_API orlz_status orlz_orlicz_to_json(const orlz_orlicz* f, char** out);

/* t^exponent on [0, inf), exponent >= 1. */
ORLZ_API orlz_status orlz_orlicz_power(double exponent, orlz_orlicz** out);

ORLZ_API void orlz_orlicz_free(orlz_orlicz* f);

ORLZ_API orlz_status orlz_orlicz_eval(const orlz_orlicz* f, double s,
                                      double* out);
/* One-sided right derivative, order 1..3. */
ORLZ_API orlz_status orlz_orlicz_deriv(const orlz_orlicz* f, int order,
                                       double s, double* out);
ORLZ_API orlz_status orlz_orlicz_inverse(const orlz_orlicz* f, double y,
                                         double* out);
ORLZ_API orlz_status orlz_orlicz_kink(const orlz_orlicz* f, int* has_kink,
                                      double* kink);

/* Solve the normalization integral for t1 and extend linearly beyond it.
 * strict != 0 additionally rescales values so the kink value is exactly 1
 * (which gives up the normalization identity unless it already held). */
ORLZ_API orlz_status orlz_normalize_linearize(const orlz_orlicz* f, int strict,
                                              orlz_orlicz** out);

/* Luxemburg norm inf{t > 0 : sum_i M(|x_i|/t) <= 1}. */
ORLZ_API orlz_status orlz_luxemburg_norm(const orlz_orlicz* f, const double* x,
                                         size_t n, double* out);

/* Legendre conjugate value; writes +inf beyond a linear tail's slope. */
ORLZ_API orlz_status orlz_conjugate_eval(const orlz_orlicz* f, double s,
                                         double* out);

/* Growth-condition reports as JSON documents. grid_points <= 0 uses the
 * default (512 log-spaced points below M^{-1}(1)). */
ORLZ_API orlz_status orlz_check_integral(const orlz_orlicz* f, double q,
                                         int grid_points, char** report_json);
ORLZ_API orlz_status orlz_check_pointwise(const orlz_orlicz* f, double q,
                                          int grid_points, char** report_json);
ORLZ_API orlz_status orlz_check_limits(const orlz_orlicz* f, double q,
                                       char** report_json);

/* Equivalence constants a^{-1} M(t/b) <= N(t) <= a M(bt) on a log grid. */
ORLZ_API orlz_status orlz_equivalence(const orlz_orlicz* m,
                                      const orlz_orlicz* n, double grid_lo,
                                      double grid_hi, int grid_points,
                                      char** report_json);

/* ---- Distributions ------------------------------------------------------ */

/* Spec format: {"kind":"pareto_q"|"uniform"|"constant"|"custom_table"
 * |"from_orlicz"|"from_orlicz_max", ...params}. */
ORLZ_API orlz_status orlz_dist_from_json(const char* json, orlz_dist** out);
ORLZ_API orlz_status orlz_dist_to_json(const orlz_dist* d, char** out);
ORLZ_API void orlz_dist_free(orlz_dist* d);

ORLZ_API orlz_status orlz_dist_survival(const orlz_dist* d, double x,
                                        double* out);
ORLZ_API orlz_status orlz_dist_quantile(const orlz_dist* d, double u,
                                        double* out);
/* Deterministic inverse-transform samples for the given seed. */
ORLZ_API orlz_status orlz_dist_sample(const orlz_dist* d, uint64_t seed,
                                      size_t count, double* out);
/* int_{[a,b)} x^r dP; pass b = INFINITY for the full upper range. */
ORLZ_API orlz_status orlz_dist_moment(const orlz_dist* d, double r, double a,
                                      double b, double* out);

/* Distribution generated by a normalized linear-tail Orlicz function;
 * p = INFINITY selects the max-functional variant. */
ORLZ_API orlz_status orlz_dist_from_orlicz(const orlz_orlicz* f, double p,
                                           orlz_dist** out);
ORLZ_API orlz_status orlz_dist_from_orlicz_max(const orlz_orlicz* f,
                                               orlz_dist** out);

/* ---- Distribution -> Orlicz maps ---------------------------------------- */

ORLZ_API orlz_status orlz_orlicz_from_max(const orlz_dist* d, int grid_points,
                                          orlz_orlicz** out);
ORLZ_API orlz_status orlz_orlicz_from_p_norm(const orlz_dist* d, double p,
                                             int grid_points,
                                             orlz_orlicz** out);
ORLZ_API orlz_status orlz_orlicz_from_q_power(const orlz_dist* d, double p,
                                              double q, int grid_points,
                                              orlz_orlicz** out);
ORLZ_API orlz_status orlz_orlicz_from_general(const orlz_dist* d,
                                              const orlz_orlicz* n,
                                              int grid_points,
                                              orlz_orlicz** out);

/* Roundtrip deviation report {grid, max_rel_dev, argmax}; p = INFINITY for
 * the max variant. */
ORLZ_API orlz_status orlz_roundtrip_report(const orlz_orlicz* f, double p,
                                           int points, char** report_json);
/* Density reconstruction report for a continuous-density distribution. */
ORLZ_API orlz_status orlz_density_reconstruction_report(const orlz_dist* d,
                                                        double p, int points,
                                                        char** report_json);

/* ---- Monte Carlo verification ------------------------------------------- */

/* config: {"theorem":"max"|"pnorm"|"lq-generation"|"tensor",
 *          "n_list":[...], "p":num|"inf", "q":num,
 *          "dist":{...}?, "orlicz":{...}?,
 *          "seed":int (required), "replicates":int,
 *          "aggregation":"auto"|"mean"|"median_of_means",
 *          "blocks":int, "workers":int}
 * Report: {"theorem","rows":[{n,estimate,dispersion,predicted,ratio}],
 *          "spread",...}. */
ORLZ_API orlz_status orlz_verify_run(const char* config_json,
                                     char** report_json);

/* config: {"orlicz":{...}, "q":num, "n_list":[...], "matrices_per_n":int,
 *          "seed":int (required), "replicates":int, ...}
 * Report: {"per_n":[{n,min_ratio,max_ratio,proxy,matrices}],
 *          "cross_n_stability"}. */
ORLZ_API orlz_status orlz_embed_run(const char* config_json,
                                    char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* ORLZ_H */
