/* C interface to ldarlct: exact learning coefficients of latent Dirichlet
 * allocation and the Gibbs/WAIC simulation that checks them.
 *
 * Every function returns an ldarlct_status. On failure the message of the
 * last error raised on the calling thread is available from
 * ldarlct_last_error(). Objects are opaque handles owned by the caller and
 * released with the matching *_free function. Paths equal to "-" mean
 * standard output.
 */
#ifndef LDARLCT_H
#define LDARLCT_H

#include <stddef.h>
#include <stdint.h>

#if defined(LDARLCT_BUILDING)
#define LDARLCT_API __attribute__((visibility("default")))
#else
#define LDARLCT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ldarlct_status {
  LDARLCT_OK = 0,
  LDARLCT_ERR_INVALID_SHAPE = 1,
  LDARLCT_ERR_INVALID_ARGUMENT = 2,
  LDARLCT_ERR_DOMAIN = 3,
  LDARLCT_ERR_IO = 4,
  LDARLCT_ERR_PARSE = 5,
  LDARLCT_ERR_REJECTION_LIMIT = 6,
  LDARLCT_ERR_NULL_ARGUMENT = 7,
  LDARLCT_ERR_INTERNAL = 8
} ldarlct_status;

typedef struct ldarlct_rational {
  int64_t num;
  int64_t den; /* > 0, lowest terms */
} ldarlct_rational;

/* M, N, H, H0, r */
typedef struct ldarlct_shape {
  int vocab_size;
  int num_docs;
  int num_topics;
  int true_topics;
  int intrinsic_rank;
} ldarlct_shape;

typedef struct ldarlct_report_row {
  int num_topics;
  ldarlct_rational lambda_theory;
  int multiplicity;
  double lambda_hat;
  double std_dev;
  double abs_diff;
  double half_dim;
  size_t replicates;
} ldarlct_report_row;

typedef struct ldarlct_truth ldarlct_truth;
typedef struct ldarlct_experiment ldarlct_experiment;
typedef struct ldarlct_report ldarlct_report;

/* Called after each finished replicate; never concurrently. */
typedef void (*ldarlct_progress_fn)(size_t finished, size_t total, void *user);

LDARLCT_API const char *ldarlct_version(void);
LDARLCT_API const char *ldarlct_status_name(ldarlct_status status);
/* Message of the last failure on this thread; "" if none. */
LDARLCT_API const char *ldarlct_last_error(void);

/* ---- exact learning coefficients ---- */

LDARLCT_API ldarlct_status ldarlct_lda_rlct(const ldarlct_shape *shape, ldarlct_rational *lambda,
                                            int *multiplicity);
LDARLCT_API ldarlct_status ldarlct_mf_rlct(int rows, int cols, int inner, int rank,
                                           ldarlct_rational *lambda, int *multiplicity);
LDARLCT_API ldarlct_status ldarlct_lda_dimension(const ldarlct_shape *shape, int64_t *dimension);
LDARLCT_API ldarlct_status ldarlct_parse_rational(const char *text, ldarlct_rational *out);
/* Writes "p/q" or "p" into buf (NUL-terminated, truncated to size). */
LDARLCT_API ldarlct_status ldarlct_format_rational(ldarlct_rational value, char *buf, size_t size);
LDARLCT_API ldarlct_status ldarlct_expected_generalization_error(ldarlct_rational lambda,
                                                                 int multiplicity, double n,
                                                                 double *out);
LDARLCT_API ldarlct_status ldarlct_free_energy_penalty(ldarlct_rational lambda, int multiplicity,
                                                       double n, double *out);

/* CSV with columns H,lambda,lambda_exact,multiplicity,half_dim. */
LDARLCT_API ldarlct_status ldarlct_write_rlct_table(int vocab_size, int num_docs, int true_topics,
                                                    int intrinsic_rank, int min_topics,
                                                    int max_topics, const char *path);

/* CSV with columns n,e_gen_lda,e_gen_regular over `points` sample sizes
 * spaced geometrically in [n_min, n_max]. dimension <= 0 leaves the regular
 * column empty. */
LDARLCT_API ldarlct_status ldarlct_write_curve(ldarlct_rational lambda, int multiplicity,
                                               double n_min, double n_max, int points,
                                               int64_t dimension, const char *path);

/* ---- true models ---- */

LDARLCT_API ldarlct_status ldarlct_truth_sample(int vocab_size, int num_docs, int true_topics,
                                                uint64_t seed, ldarlct_truth **out);
LDARLCT_API ldarlct_status ldarlct_truth_load(const char *path, ldarlct_truth **out);
LDARLCT_API ldarlct_status ldarlct_truth_save(const ldarlct_truth *truth, const char *path);
LDARLCT_API ldarlct_status ldarlct_truth_dims(const ldarlct_truth *truth, int *vocab_size,
                                              int *num_docs, int *true_topics);
LDARLCT_API ldarlct_status ldarlct_truth_rank(const ldarlct_truth *truth, int *intrinsic_rank);
/* Writes n tokens drawn from the truth in the "M N n" + "doc<TAB>word" format. */
LDARLCT_API ldarlct_status ldarlct_truth_write_dataset(const ldarlct_truth *truth, size_t n,
                                                       uint64_t seed, const char *path);
LDARLCT_API void ldarlct_truth_free(ldarlct_truth *truth);

/* ---- simulation experiments ---- */

LDARLCT_API ldarlct_status ldarlct_experiment_create(ldarlct_experiment **out);
LDARLCT_API ldarlct_status ldarlct_experiment_load_config(ldarlct_experiment *exp,
                                                          const char *path);
/* Same keys as the config file. */
LDARLCT_API ldarlct_status ldarlct_experiment_set(ldarlct_experiment *exp, const char *key,
                                                  const char *value);
LDARLCT_API ldarlct_status ldarlct_experiment_run(ldarlct_experiment *exp, int threads,
                                                  ldarlct_progress_fn progress, void *user);
/* Writes replicates.csv, report.csv, summary.txt and truth.txt (plus
 * draws_H<h>.txt when dump_draws is set) into an existing directory. */
LDARLCT_API ldarlct_status ldarlct_experiment_write(const ldarlct_experiment *exp,
                                                    const char *out_dir);
LDARLCT_API ldarlct_status ldarlct_experiment_row_count(const ldarlct_experiment *exp,
                                                        size_t *count);
LDARLCT_API ldarlct_status ldarlct_experiment_get_row(const ldarlct_experiment *exp, size_t index,
                                                  ldarlct_report_row *row);
LDARLCT_API void ldarlct_experiment_free(ldarlct_experiment *exp);

/* ---- reports from replicate CSV files ---- */

/* base->num_topics is ignored; each H in the file gets its own row. */
LDARLCT_API ldarlct_status ldarlct_report_from_csv(const char *csv_path, const ldarlct_shape *base,
                                                   ldarlct_report **out);
/* Writes report.csv and summary.txt into an existing directory. */
LDARLCT_API ldarlct_status ldarlct_report_write(const ldarlct_report *report, const char *out_dir);
LDARLCT_API ldarlct_status ldarlct_report_row_count(const ldarlct_report *report, size_t *count);
LDARLCT_API ldarlct_status ldarlct_report_get_row(const ldarlct_report *report, size_t index,
                                              ldarlct_report_row *row);
LDARLCT_API void ldarlct_report_free(ldarlct_report *report);

#ifdef __cplusplus
}
#endif

#endif /* LDARLCT_H */
