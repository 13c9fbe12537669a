/*
 * sparrowlab C API.
 *
 * A laboratory for the SPARROW covert channel over LTE/5G contention
 * resolution and its entropy-leveraging countermeasures (k-errors,
 * k-erasures, salted-digest erasure). The library quantifies the
 * protection/performance trade-off with closed forms, exhaustive
 * enumeration at small bit widths, and seeded discrete-event simulation.
 *
 * Conventions:
 *   - every fallible call returns sparrow_status; SPARROW_OK is 0 and
 *     sparrow_last_error() describes the most recent failure on the
 *     calling thread;
 *   - objects are opaque handles created/destroyed by matching calls;
 *   - identities, masks and digests cross the boundary as big-endian
 *     binary strings of '0'/'1' (the library's canonical rendering);
 *   - strings and buffers returned through out-parameters are owned by
 *     the caller and released with sparrow_string_free/sparrow_buffer_free;
 *   - everything is deterministic given the seeds passed in.
 */

#ifndef SPARROW_SPARROW_H
#define SPARROW_SPARROW_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SPARROW_API __declspec(dllexport)
#else
#define SPARROW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sparrow_status {
    SPARROW_OK = 0,
    SPARROW_ERR_INVALID = 1,       /* bad argument or config invariant */
    SPARROW_ERR_WIDTH = 2,         /* bit-width contract violation */
    SPARROW_ERR_RANGE = 3,         /* numeric parameter out of range */
    SPARROW_ERR_UNSATISFIABLE = 4, /* construction budget exhausted */
    SPARROW_ERR_INFEASIBLE = 5,    /* run rejected as infeasible */
    SPARROW_ERR_UNSUPPORTED = 6,   /* outside the implemented envelope */
    SPARROW_ERR_IO = 7,            /* file system failure */
    SPARROW_ERR_INTERNAL = 8
} sparrow_status;

typedef enum sparrow_variant {
    SPARROW_SCHEME_PLAIN = 0,
    SPARROW_SCHEME_KERRORS = 1,
    SPARROW_SCHEME_KERASURES = 2,
    SPARROW_SCHEME_ELISHA = 3
} sparrow_variant;

typedef enum sparrow_backend {
    SPARROW_DIGEST_CRYPTO_HASH = 0, /* SHA-256 of (salt || x), low l bits */
    SPARROW_DIGEST_PERMUTATION = 1, /* keyed bijection, l == n */
    SPARROW_DIGEST_ORACLE = 2       /* memoized uniform draw per (x, salt) */
} sparrow_backend;

typedef enum sparrow_book_structure {
    SPARROW_BOOK_RANDOM = 0,
    SPARROW_BOOK_MINDIST = 1, /* param = minimum pairwise Hamming distance */
    SPARROW_BOOK_TAGGED = 2   /* param = integrity tag bits */
} sparrow_book_structure;

typedef enum sparrow_decision {
    SPARROW_BACKOFF = 0,
    SPARROW_PROCEED = 1
} sparrow_decision;

typedef enum sparrow_decode_kind {
    SPARROW_DECODED = 0,
    SPARROW_AMBIGUOUS = 1,
    SPARROW_NOMATCH = 2
} sparrow_decode_kind;

typedef struct sparrow_rng sparrow_rng;
typedef struct sparrow_scheme sparrow_scheme;
typedef struct sparrow_codebook sparrow_codebook;
typedef struct sparrow_broadcast sparrow_broadcast;

/* Scheme parameters. l_bits/salt_bits only matter for the elisha variant;
 * oracle_seed drives the random-oracle stub's memoized draws. */
typedef struct sparrow_scheme_params {
    int variant;   /* sparrow_variant */
    int n_bits;    /* identity width, 1..256 */
    int l_bits;    /* digest width (elisha) */
    int k;         /* error/erasure count */
    int salt_bits; /* salting nonce width (elisha); 0 = unsalted */
    int backend;   /* sparrow_backend (elisha) */
    uint64_t oracle_seed;
} sparrow_scheme_params;

typedef struct sparrow_sim_params {
    sparrow_scheme_params scheme;
    double exchange_ms;      /* > 0, default 30 */
    double backoff_ms;       /* >= 0, default 10 */
    double background_rate;  /* mean Poisson contenders per slot */
    double duration_s;       /* simulated wall-clock budget */
    uint64_t seed;
} sparrow_sim_params;

SPARROW_API const char* sparrow_version(void);

/* Thread-local message for the last failing call. Never NULL. */
SPARROW_API const char* sparrow_last_error(void);

SPARROW_API void sparrow_string_free(char* s);
SPARROW_API void sparrow_buffer_free(uint8_t* p);

/* ---- seeded random stream ------------------------------------------- */

SPARROW_API sparrow_rng* sparrow_rng_create(uint64_t seed);
SPARROW_API void sparrow_rng_destroy(sparrow_rng* rng);

/* ---- schemes: B(X), hints, D(Y, X_i) -------------------------------- */

SPARROW_API sparrow_status sparrow_scheme_create(
    const sparrow_scheme_params* params, sparrow_scheme** out);
SPARROW_API void sparrow_scheme_destroy(sparrow_scheme* scheme);

/* Obfuscate an identity (binary string of exactly n_bits characters). */
SPARROW_API sparrow_status sparrow_obfuscate(sparrow_scheme* scheme,
                                             const char* identity_bits,
                                             sparrow_rng* rng,
                                             sparrow_broadcast** out);
SPARROW_API void sparrow_broadcast_destroy(sparrow_broadcast* y);

/* The UE decision function; *decision gets a sparrow_decision. */
SPARROW_API sparrow_status sparrow_decide(sparrow_scheme* scheme,
                                          const sparrow_broadcast* y,
                                          const char* identity_bits,
                                          int* decision);

/* Broadcast payload as a binary string. */
SPARROW_API sparrow_status sparrow_broadcast_payload(const sparrow_broadcast* y,
                                                     char** payload_bits);

/* Msg4 wire format: tag byte, 2-byte big-endian payload bit length,
 * payload bits, then hint fields (K / mask bitmap / salt). */
SPARROW_API sparrow_status sparrow_msg4_encode(const sparrow_scheme* scheme,
                                               const sparrow_broadcast* y,
                                               uint8_t** bytes, size_t* len);
SPARROW_API sparrow_status sparrow_msg4_decode(const sparrow_scheme* scheme,
                                               const uint8_t* bytes, size_t len,
                                               sparrow_broadcast** out);

/* ---- adversary codebooks -------------------------------------------- */

/* Build 2^m_bits distinct n-bit codewords. param: min distance d for
 * SPARROW_BOOK_MINDIST, tag bits for SPARROW_BOOK_TAGGED, 0 otherwise.
 * Greedy min-distance construction fails with SPARROW_ERR_UNSATISFIABLE
 * when its candidate budget (10^6 draws) is exhausted. */
SPARROW_API sparrow_status sparrow_codebook_build(int n_bits, int m_bits,
                                                  int structure, int param,
                                                  sparrow_rng* rng,
                                                  sparrow_codebook** out);

/* Implicit codebook of all 2^n identities (the plain-scheme baseline). */
SPARROW_API sparrow_status sparrow_codebook_full(int n_bits,
                                                 sparrow_codebook** out);

/* Plain-text exchange file: header line with n, m and structure, then one
 * binary-string codeword per line. */
SPARROW_API sparrow_status sparrow_codebook_save(const sparrow_codebook* book,
                                                 const char* path);
SPARROW_API sparrow_status sparrow_codebook_load(const char* path,
                                                 sparrow_codebook** out);

SPARROW_API uint64_t sparrow_codebook_size(const sparrow_codebook* book);
SPARROW_API sparrow_status sparrow_codebook_word(const sparrow_codebook* book,
                                                 uint64_t index, char** word_bits);
SPARROW_API void sparrow_codebook_destroy(sparrow_codebook* book);

/* Ricky's estimator E(Y). *kind gets a sparrow_decode_kind; *word_bits is
 * set only for SPARROW_DECODED (pass NULL if not wanted). */
SPARROW_API sparrow_status sparrow_estimate(sparrow_scheme* scheme,
                                            const sparrow_broadcast* y,
                                            const sparrow_codebook* book,
                                            int* kind, char** word_bits);

/* ---- analytics ------------------------------------------------------- */

/* P_C = C(n,k)/2^n. */
SPARROW_API sparrow_status sparrow_pc_kerrors(int n, int k, double* p_c,
                                              double* log2_p_c);
/* P_C = 2^(k-n). */
SPARROW_API sparrow_status sparrow_pc_kerasures(int n, int k, double* p_c,
                                                double* log2_p_c);
/* P_C ~= 2^(k-l), digest collisions ignored. */
SPARROW_API sparrow_status sparrow_pc_elisha(int l, int k, double* p_c,
                                             double* log2_p_c);
/* Exhaustive P_C over all identity pairs and masks; n_bits <= 14. */
SPARROW_API sparrow_status sparrow_pc_exact(const sparrow_scheme_params* params,
                                            double* p_c, double* log2_p_c);
/* Disruption rate, log-space product over 2^m codewords; saturates to 1. */
SPARROW_API sparrow_status sparrow_pd_elisha(int l, int k, int m, double* p_d);
SPARROW_API sparrow_status sparrow_pd_elisha_real(int l, double k, int m,
                                                  double* p_d);
/* Monte Carlo disruption rate with a 95% binomial CI; elisha, l <= 24. */
SPARROW_API sparrow_status sparrow_pd_montecarlo(
    const sparrow_scheme_params* params, int m, uint64_t trials, uint64_t seed,
    double* p_d, double* ci_low, double* ci_high);
/* I(X;Y) = -log2(p_c). */
SPARROW_API sparrow_status sparrow_capacity_from_pc(double p_c, double* bits);
/* Exact I(X;Y) from the full channel matrix; n_bits <= 12, not elisha. */
SPARROW_API sparrow_status sparrow_mutual_information(
    const sparrow_scheme_params* params, double* bits);
/* Smallest P_e with H_b(P_e) + P_e log2(2^a - 1) >= h. */
SPARROW_API sparrow_status sparrow_fano_lower_bound(double h_x_given_y,
                                                    int alphabet_log2,
                                                    double* p_e);
/* Largest integer k with 2^(k-l) <= pc_target. */
SPARROW_API sparrow_status sparrow_elisha_k_for_pc(int l, double pc_target,
                                                   int* k);
/* Real k solving pd_elisha_real(l, k, m) == pd_target by bisection. */
SPARROW_API sparrow_status sparrow_elisha_k_for_pd(int l, int m,
                                                   double pd_target, double* k);

/* ---- simulation ------------------------------------------------------ */

/* Two-UE Monte Carlo P_C; trials >= 10^4. */
SPARROW_API sparrow_status sparrow_estimate_pc_mc(
    const sparrow_scheme_params* params, uint64_t trials, uint64_t seed,
    double* p_c, double* ci_low, double* ci_high);

/* Covert session; *json_report gets the flat trial report. */
SPARROW_API sparrow_status sparrow_run_session(const sparrow_sim_params* sim,
                                               const sparrow_codebook* book,
                                               uint64_t message_bits,
                                               char** json_report);

/* Multi-cell run. mode: 0 single cell, 1 parallel, 2 relay chain. For a
 * relay chain, hop_latencies holds n_cells-1 per-hop latencies in attempts
 * (cells are chained in order); pass NULL otherwise. */
SPARROW_API sparrow_status sparrow_run_topology(int mode,
                                                const sparrow_sim_params* cells,
                                                int n_cells,
                                                const int* hop_latencies,
                                                const sparrow_codebook* book,
                                                uint64_t message_bits,
                                                uint64_t seed,
                                                char** json_report);

/* ---- adversary strategy demos ---------------------------------------- */

SPARROW_API sparrow_status sparrow_demo_preimage(uint64_t trials, uint64_t seed,
                                                 int unsalted_bits,
                                                 int unsalted_m, int salted_bits,
                                                 int salted_k,
                                                 int salted_salt_bits,
                                                 int salted_m,
                                                 char** json_report);
SPARROW_API sparrow_status sparrow_demo_repetition(int n, int k, int repeats,
                                                   uint64_t trials,
                                                   uint64_t seed,
                                                   char** json_report);
SPARROW_API sparrow_status sparrow_demo_mindist(int n, int m, int d, int k,
                                                uint64_t trials, uint64_t seed,
                                                char** json_report);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SPARROW_SPARROW_H */
