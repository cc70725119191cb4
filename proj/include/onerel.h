/* C interface to the one-relator toolkit. Every operation returns a status
 * code and, on success, a malloc'd JSON (or CSV) string in *out that the
 * caller releases with onerel_free. On failure *out is left null and
 * onerel_last_error() holds a message for the calling thread. */
#ifndef ONEREL_H
#define ONEREL_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define ONEREL_API __declspec(dllexport)
#else
#define ONEREL_API __attribute__((visibility("default")))
#endif

/* Status codes double as CLI exit codes. */
#define ONEREL_OK 0
#define ONEREL_DOMAIN 1 /* valid request, impossible answer */
#define ONEREL_USAGE 2  /* malformed request */

/* Ascending HNN data: base free rank, endomorphism, stable letter. */
typedef struct onerel_hnn onerel_hnn;

ONEREL_API const char* onerel_version(void);
ONEREL_API const char* onerel_last_error(void);
ONEREL_API void onerel_free(char* buf);

/* phi lists one image word per base generator, e.g. {"ab", "ba"}.
 * stable may be null for the default "t". */
ONEREL_API int onerel_hnn_new(int base_rank, const char* const* phi, int phi_count,
                              const char* stable, onerel_hnn** out);
/* Built-in groups: "HT" (trace swap, F_2 base) and "BS12" (Baumslag-Solitar
 * BS(1,2), Z base). */
ONEREL_API int onerel_hnn_named(const char* name, onerel_hnn** out);
ONEREL_API void onerel_hnn_destroy(onerel_hnn* h);
ONEREL_API int onerel_hnn_describe(const onerel_hnn* h, char** out_json);

/* model 1 = freely reduced, model 2 = cyclically reduced. */
ONEREL_API int onerel_sample(int model, int rank, int max_len, int count,
                             unsigned long long seed, char** out_json);
/* Ascending-HNN criterion for a rank-2 relator (rank 1 and >= 3 get their
 * immediate verdicts). */
ONEREL_API int onerel_brown(const char* word, int rank, char** out_json);
/* Goodness of a relator; for bad rank-3 relators repair != 0 also returns a
 * repaired word four letters longer. */
ONEREL_API int onerel_goodness(const char* word, int rank, int repair, char** out_json);
/* Rewriting over indexed letters relative to the given stable letter, e.g.
 * stable_letter = "b". */
ONEREL_API int onerel_magnus(const char* word, int rank, const char* stable_letter,
                             char** out_json);
/* Magnus rewriting followed by elimination of the unique extreme letter,
 * yielding ascending HNN data. */
ONEREL_API int onerel_extract(const char* word, int rank, const char* stable_letter,
                              char** out_json);
/* word is spelled over base letters a.. plus t/T for the stable letter. */
ONEREL_API int onerel_normalform(const onerel_hnn* h, const char* word, char** out_json);
ONEREL_API int onerel_smallcancel(const char* const* words, int word_count, int rank,
                                  long lambda_num, long lambda_den, char** out_json);
/* Two-generator embedding of a rank-k relator group; n_override 0 picks the
 * block parameter from the index span. */
ONEREL_API int onerel_embed(const char* word, int rank, long n_override, char** out_json);
/* Largeness parameters for the Baumslag-Pride family G(g, r; m). */
ONEREL_API int onerel_largeness(long g, long r, long m, char** out_json);
/* Same bookkeeping driven by concrete relators: rewrites each one inside the
 * index-n subgroup. stable_letter names the generator with zero exponent sum
 * in every relator. */
ONEREL_API int onerel_largeness_words(const char* const* words, int word_count, int rank,
                                      const char* stable_letter, long n, char** out_json);
/* Orbit of the standard seed tuple under the endomorphism at this modulus. */
ONEREL_API int onerel_period(const onerel_hnn* h, unsigned long long modulus, int adjoint,
                             char** out_json);
/* Period growth across p, p^2, ..., p^depth against the p-fold lifting law. */
ONEREL_API int onerel_hensel(const onerel_hnn* h, long p, int depth, int adjoint,
                             char** out_json);
/* Tuples over F_{q^m} that the endomorphism moves exactly like the s-th
 * Frobenius power. */
ONEREL_API int onerel_quasifixed(const onerel_hnn* h, int q, int m, int s, int sl2_only,
                                 int workers, char** out_json);
/* Wreath-product nontriviality certificate for a base word. primes_csv may
 * be null for the default "5,7,11,13". A fruitless search is ONEREL_OK with
 * {"found": false}. */
ONEREL_API int onerel_certify(const onerel_hnn* h, const char* word, const char* primes_csv,
                              int e_cap, int parallel, char** out_json);
/* Recheck a certificate produced by onerel_certify. Always ONEREL_OK for
 * well-formed JSON; the verdict is the "verified" field. */
ONEREL_API int onerel_verify(const char* certificate_json, char** out_json);
/* kind: p_good | hull_goodness | hull_growth | small_cancellation.
 * lengths_csv like "50,200,800". lambda_* apply to small_cancellation only.
 * csv != 0 emits CSV instead of JSON. elapsed_seconds may be null. */
ONEREL_API int onerel_experiment(const char* kind, int k, const char* lengths_csv,
                                 long trials, unsigned long long seed, int workers,
                                 long lambda_num, long lambda_den, int keep_samples,
                                 int csv, double* elapsed_seconds, char** out);

#ifdef __cplusplus
}
#endif

#endif /* ONEREL_H */
