/*
 * codedlab C API: coded computing schemes (gradient coding, coded matrix
 * multiplication), randomized sketching, and a deterministic straggler
 * simulator, exposed through opaque handles and status codes.
 *
 * Every function returns CODEDLAB_OK on success; on failure the return code
 * classifies the error and codedlab_last_error() carries a human-readable
 * message for the calling thread. Handles are freed with their matching
 * *_free function; freeing NULL is a no-op.
 */
#ifndef CODEDLAB_H
#define CODEDLAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum codedlab_status {
    CODEDLAB_OK = 0,
    CODEDLAB_ERR_INVALID = 1,       /* invalid argument or precondition */
    CODEDLAB_ERR_CONFIG = 2,        /* config parse/validation failure */
    CODEDLAB_ERR_UNRECOVERABLE = 3, /* decode/round below threshold */
    CODEDLAB_ERR_IO = 4,            /* file IO failure */
    CODEDLAB_ERR_INTERNAL = 5
} codedlab_status;

typedef struct codedlab_matrix codedlab_matrix;
typedef struct codedlab_config codedlab_config;
typedef struct codedlab_gc_scheme codedlab_gc_scheme;
typedef struct codedlab_cmm_scheme codedlab_cmm_scheme;

const char* codedlab_version(void);
/* Message for the last failing call on this thread; never NULL. */
const char* codedlab_last_error(void);

/* ---- matrices (row-major doubles) ---- */

codedlab_status codedlab_matrix_create(size_t rows, size_t cols, const double* data,
                                       codedlab_matrix** out);
codedlab_status codedlab_matrix_create_complex(size_t rows, size_t cols, const double* real,
                                               const double* imag, codedlab_matrix** out);
codedlab_status codedlab_matrix_random_gaussian(size_t rows, size_t cols, uint64_t seed,
                                                codedlab_matrix** out);
void codedlab_matrix_free(codedlab_matrix* m);
codedlab_status codedlab_matrix_shape(const codedlab_matrix* m, size_t* rows, size_t* cols);
codedlab_status codedlab_matrix_get(const codedlab_matrix* m, size_t row, size_t col,
                                    double* real, double* imag);
/* Copies the real parts into a caller buffer of rows*cols doubles. */
codedlab_status codedlab_matrix_copy_real(const codedlab_matrix* m, double* out);
codedlab_status codedlab_matrix_multiply(const codedlab_matrix* a, const codedlab_matrix* b,
                                         codedlab_matrix** out);
codedlab_status codedlab_matrix_frobenius(const codedlab_matrix* m, double* out);

/* ---- randomized sketching ---- */

/* CR-sampling estimate of A*B with q draws (A: L x N, B: N x M). */
codedlab_status codedlab_approximate_product(const codedlab_matrix* a, const codedlab_matrix* b,
                                             size_t q, uint64_t seed, codedlab_matrix** out);

/* ---- gradient coding ----
 * Schemes are built from a key=value spec, e.g.
 *   "scheme=brs n=8 k=4 s=2"        "scheme=expander graph=petersen s=1"
 *   "scheme=frc n=4 s=1"            "scheme=bernoulli n=10 k=10 s=3 seed=7"
 *   "scheme=bibd design=fano s=2"
 */
codedlab_status codedlab_gc_create(const char* spec, codedlab_gc_scheme** out);
void codedlab_gc_free(codedlab_gc_scheme* scheme);
codedlab_status codedlab_gc_shape(const codedlab_gc_scheme* scheme, size_t* n, size_t* k,
                                  size_t* s);
codedlab_status codedlab_gc_encoding(const codedlab_gc_scheme* scheme, codedlab_matrix** out);
/* Decoding deviation || a_I^T G_I - target || for the straggler set. */
codedlab_status codedlab_gc_error(const codedlab_gc_scheme* scheme, const size_t* stragglers,
                                  size_t count, double* out);
/* Worst case over straggler sets of size s; exhaustive below the budget,
 * otherwise sampled (then *exhaustive is 0). */
codedlab_status codedlab_gc_max_error(const codedlab_gc_scheme* scheme, size_t s, double* out,
                                      int* exhaustive);

/* ---- coded matrix multiplication ----
 * Specs, e.g.
 *   "scheme=matdot k=4 n=9"          "scheme=polynomial k=2 n=5"
 *   "scheme=entangled n=5"           "scheme=independent k=4 r=2 n=3 seed=1"
 *   "scheme=setwise k=4 r=2 n=3"     "scheme=weighted-cr k=4 r=2 n=3 seed=1"
 *   "scheme=oversketch q=16 block=4 e=1 seed=1"
 */
codedlab_status codedlab_cmm_create(const char* spec, const codedlab_matrix* a,
                                    const codedlab_matrix* b, codedlab_cmm_scheme** out);
void codedlab_cmm_free(codedlab_cmm_scheme* scheme);
codedlab_status codedlab_cmm_servers(const codedlab_cmm_scheme* scheme, size_t* out);
codedlab_status codedlab_cmm_threshold(const codedlab_cmm_scheme* scheme, size_t* out);
codedlab_status codedlab_cmm_task(const codedlab_cmm_scheme* scheme, size_t server,
                                  codedlab_matrix** out);
/* Computes the listed servers' tasks and decodes from them. */
codedlab_status codedlab_cmm_decode(const codedlab_cmm_scheme* scheme, const size_t* servers,
                                    size_t count, codedlab_matrix** out);

/* ---- experiment configs and runs ---- */

/* Parses a config document ([command] section + key=value lines). On failure
 * codedlab_last_error() lists every issue with line numbers. */
codedlab_status codedlab_config_parse(const char* text, codedlab_config** out);
codedlab_status codedlab_config_parse_file(const char* path, codedlab_config** out);
void codedlab_config_free(codedlab_config* config);
/* "gc", "cmm", "sketch", "descend", or "report". */
codedlab_status codedlab_config_command(const codedlab_config* config, const char** out);
/* Validated single-key override (e.g. seed/out/format from CLI flags). */
codedlab_status codedlab_config_set(codedlab_config* config, const char* key,
                                    const char* value);

/* Runs the experiment and writes rows to `path` ("" or NULL for stdout) in
 * the given format ("" or NULL defers to the config). Returns
 * CODEDLAB_ERR_UNRECOVERABLE when any round failed to decode; rows are still
 * written in that case. */
codedlab_status codedlab_run_to_file(const codedlab_config* config, const char* path,
                                     const char* format);

#ifdef __cplusplus
}
#endif

#endif /* CODEDLAB_H */
