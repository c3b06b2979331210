/*
 * mallowslab C API
 *
 * Exact one-dimensional Mallows/Kolmogorov distances between empirical
 * samples and the standard normal law, Gibbs chain experiment runs, and the
 * oracle verification suite, behind a plain C surface: opaque handles,
 * integer status codes, thread-local error detail.
 *
 * Every function returns MLAB_OK on success.  On failure the out-parameters
 * are left untouched and mlab_last_error() describes the problem for the
 * calling thread.
 */

#ifndef MALLOWSLAB_MALLOWS_LAB_H
#define MALLOWSLAB_MALLOWS_LAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MLAB_API __declspec(dllexport)
#else
#define MLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mlab_status {
    MLAB_OK = 0,
    MLAB_ERR_INVALID_ARGUMENT = 1,
    MLAB_ERR_DOMAIN = 2,
    MLAB_ERR_CONFIG = 3,      /* malformed experiment config (see mlab_last_error) */
    MLAB_ERR_MODEL_GUARD = 4, /* tail mass / zero variance guard tripped */
    MLAB_ERR_IO = 5,
    MLAB_ERR_INTERNAL = 6
} mlab_status;

MLAB_API const char* mlab_version(void);
MLAB_API const char* mlab_status_name(mlab_status status);
MLAB_API const char* mlab_last_error(void); /* thread-local; empty when no error */

/* --- sorted samples ----------------------------------------------------- */

typedef struct mlab_sample mlab_sample; /* opaque */

/* copies `count` finite values (any order); count must be >= 1 */
MLAB_API mlab_status mlab_sample_create(const double* values, size_t count,
                                        mlab_sample** out_sample);
MLAB_API void mlab_sample_free(mlab_sample* sample);
MLAB_API size_t mlab_sample_size(const mlab_sample* sample);

/* empirical distribution function and generalized inverse (0 < u < 1) */
MLAB_API mlab_status mlab_sample_cdf(const mlab_sample* sample, double x, double* out);
MLAB_API mlab_status mlab_sample_quantile(const mlab_sample* sample, double u, double* out);

/* --- distances ----------------------------------------------------------- */

/* d_r between two empirical samples (exact comonotone coupling), r > 0 */
MLAB_API mlab_status mlab_mallows_between(const mlab_sample* a, const mlab_sample* b,
                                          double r, double* out);

/* d_r between a sample and N(mean, sd); r = 1, 2 closed form, otherwise
 * adaptive quadrature with absolute tolerance 1e-8 on d_r^r */
MLAB_API mlab_status mlab_mallows_to_normal(const mlab_sample* sample, double mean,
                                            double sd, double r, double* out);

/* sup-distance between the empirical d.f. and N(mean, sd) */
MLAB_API mlab_status mlab_kolmogorov_to_normal(const mlab_sample* sample, double mean,
                                               double sd, double* out);

/* closed form d_2(N(m1,s1), N(m2,s2)) = sqrt((m1-m2)^2 + (s1-s2)^2) */
MLAB_API mlab_status mlab_normal_mallows2(double m1, double s1, double m2, double s2,
                                          double* out);

/* --- standard normal toolkit --------------------------------------------- */

MLAB_API mlab_status mlab_normal_cdf(double x, double* out);
MLAB_API mlab_status mlab_normal_quantile(double u, double* out); /* 0 < u < 1 */
MLAB_API mlab_status mlab_normal_abs_moment(double r, double* out); /* r > 0 */

/* --- experiments ---------------------------------------------------------- */

typedef struct mlab_run_options {
    const char* out_dir; /* NULL: use the config's [output] directory */
    uint64_t seed;       /* applied only when has_seed != 0 */
    int has_seed;
    int threads;         /* <= 0: single worker */
} mlab_run_options;

/* Runs a key=value experiment config; writes report.csv, covariance.csv,
 * blocks.csv, plotdata_*.tsv and manifest.txt into the output directory.
 * MLAB_ERR_CONFIG carries a line-numbered message in mlab_last_error(). */
MLAB_API mlab_status mlab_run_experiment(const char* config_path,
                                         const mlab_run_options* options);

/* verification suite flags (fixtures for negative testing) */
#define MLAB_VERIFY_FLIP_HAMILTONIAN 1u
#define MLAB_VERIFY_SKIP_DK_BOUND 2u
#define MLAB_VERIFY_QUIET 4u

/* Runs the oracle-equivalence / invariant suite; *out_failures receives the
 * number of failed checks (0 = all green). */
MLAB_API mlab_status mlab_verify_suite(unsigned flags, int threads, int* out_failures);

/* Removes cached ensembles under dir; *out_removed receives the count. */
MLAB_API mlab_status mlab_cache_clear(const char* dir, int* out_removed);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MALLOWSLAB_MALLOWS_LAB_H */
