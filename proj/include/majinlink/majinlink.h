/*
 * majinlink C API.
 *
 * Every call takes an mjl_context for error reporting. Functions return an
 * mjl_status; on failure mjl_last_error() holds a message until the next call
 * on the same context. A context must not be used from two threads at once;
 * separate contexts are independent.
 */
#ifndef MAJINLINK_H_
#define MAJINLINK_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MAJINLINK_BUILDING)
#    define MJL_API __declspec(dllexport)
#  else
#    define MJL_API __declspec(dllimport)
#  endif
#else
#  define MJL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mjl_status {
  MJL_OK = 0,
  MJL_ERR_INVALID_ARGUMENT = 1,
  MJL_ERR_IO = 2,
  MJL_ERR_PARSE = 3,
  MJL_ERR_EXTRACTION = 4,
  MJL_ERR_CONTRACT = 5,
  MJL_ERR_NOT_FOUND = 6,
  MJL_ERR_BUFFER_TOO_SMALL = 7,
  MJL_ERR_INTERNAL = 99
} mjl_status;

typedef enum mjl_id_kind {
  MJL_ID_NONE = 0,
  MJL_ID_ISBN13 = 1,
  MJL_ID_ASIN = 2
} mjl_id_kind;

typedef enum mjl_format_class {
  MJL_FORMAT_EPUB = 0,
  MJL_FORMAT_PDF = 1,
  MJL_FORMAT_DISCARD = 2
} mjl_format_class;

typedef enum mjl_log_level {
  MJL_LOG_DEBUG = 0,
  MJL_LOG_INFO = 1,
  MJL_LOG_WARN = 2,
  MJL_LOG_ERROR = 3,
  MJL_LOG_OFF = 4
} mjl_log_level;

typedef struct mjl_context mjl_context;
typedef struct mjl_minhasher mjl_minhasher;
typedef struct mjl_lsh_index mjl_lsh_index;

MJL_API const char* mjl_version(void);
MJL_API const char* mjl_status_string(mjl_status status);
MJL_API void mjl_set_log_level(mjl_log_level level);

MJL_API mjl_context* mjl_context_create(void);
MJL_API void mjl_context_destroy(mjl_context* ctx);
MJL_API const char* mjl_last_error(const mjl_context* ctx);

/* ---- identifiers and text ---------------------------------------------- */

/* Writes the canonical value (NUL-terminated) into out. An input that is not
 * a valid identifier returns MJL_OK with *kind = MJL_ID_NONE and out = "". */
MJL_API mjl_status mjl_normalize_identifier(mjl_context* ctx, const char* raw,
                                            mjl_id_kind* kind, char* out, size_t out_size);

MJL_API mjl_status mjl_classify_format(mjl_context* ctx, const char* extension,
                                       mjl_format_class* out);

/* Normalized text is written NUL-terminated. When out_size is too small,
 * MJL_ERR_BUFFER_TOO_SMALL is returned and *required holds the size needed
 * including the terminator. */
MJL_API mjl_status mjl_normalize_text(mjl_context* ctx, const char* text, char* out,
                                      size_t out_size, size_t* required);

/* ---- fuzzy title matching ---------------------------------------------- */

MJL_API mjl_status mjl_ratio(mjl_context* ctx, const char* a, const char* b, double* out);
MJL_API mjl_status mjl_partial_ratio(mjl_context* ctx, const char* a, const char* b,
                                     double* out);
/* *defined is 0 when either title list has nothing usable. */
MJL_API mjl_status mjl_title_score(mjl_context* ctx, const char* const* cluster_titles,
                                   size_t n_cluster, const char* const* edition_titles,
                                   size_t n_edition, double* out, int* defined);

/* ---- MinHash / LSH ----------------------------------------------------- */

typedef struct mjl_lsh_params {
  uint32_t bands;
  uint32_t rows;
  double threshold;
  uint32_t num_perm;
} mjl_lsh_params;

MJL_API mjl_status mjl_optimal_params(mjl_context* ctx, double threshold, uint32_t num_perm,
                                      double fp_weight, double fn_weight, mjl_lsh_params* out);

MJL_API mjl_status mjl_minhasher_create(mjl_context* ctx, uint32_t num_perm, uint64_t seed,
                                        mjl_minhasher** out);
MJL_API void mjl_minhasher_destroy(mjl_minhasher* hasher);
/* Normalizes and shingles the text, then signs it. slots must hold num_perm
 * values. Empty text is MJL_ERR_INVALID_ARGUMENT. */
MJL_API mjl_status mjl_minhash_text(mjl_context* ctx, const mjl_minhasher* hasher,
                                    const char* text, uint64_t* slots, size_t n_slots);
MJL_API mjl_status mjl_estimate_jaccard(mjl_context* ctx, const uint64_t* a,
                                        const uint64_t* b, size_t n_slots, double* out);

MJL_API mjl_status mjl_lsh_index_create(mjl_context* ctx, const mjl_lsh_params* params,
                                        uint64_t seed, mjl_lsh_index** out);
MJL_API void mjl_lsh_index_destroy(mjl_lsh_index* index);
MJL_API mjl_status mjl_lsh_index_insert(mjl_context* ctx, mjl_lsh_index* index,
                                        const char* item_id, const uint64_t* slots,
                                        size_t n_slots);
/* Invokes fn once per candidate item id, in ascending id order. */
typedef void (*mjl_item_callback)(const char* item_id, void* user);
MJL_API mjl_status mjl_lsh_index_query(mjl_context* ctx, const mjl_lsh_index* index,
                                       const char* item_id, const uint64_t* slots,
                                       size_t n_slots, mjl_item_callback fn, void* user);

/* ---- statistics -------------------------------------------------------- */

MJL_API mjl_status mjl_herfindahl(mjl_context* ctx, const double* shares, size_t n,
                                  int normalized, double* out);
MJL_API mjl_status mjl_median_iqr(mjl_context* ctx, const double* values, size_t n,
                                  double* median, double* q1, double* q3);

/* ---- pipeline stages (file to file) ------------------------------------ */

typedef struct mjl_ingest_options {
  const char* items_file;
  const char* payload_dir;
  const char* out_dir;
} mjl_ingest_options;

typedef struct mjl_ingest_summary {
  size_t total, retained, discarded_format, pdf, too_small, too_large, missing_payload,
      extraction_error, empty_text;
} mjl_ingest_summary;

MJL_API mjl_status mjl_run_ingest(mjl_context* ctx, const mjl_ingest_options* options,
                                  mjl_ingest_summary* summary);

typedef struct mjl_dedup_options {
  const char* items_file;
  const char* shingles_dir;
  const char* out_dir;
  double threshold;
  uint32_t num_perm;
  uint64_t seed;
  size_t min_cluster_size;
  int exact;
} mjl_dedup_options;

typedef struct mjl_dedup_summary {
  size_t items, clusters, multi_item, written;
  mjl_lsh_params params;
} mjl_dedup_summary;

MJL_API mjl_status mjl_run_dedup(mjl_context* ctx, const mjl_dedup_options* options,
                                 mjl_dedup_summary* summary);

typedef struct mjl_link_options {
  const char* clusters_file;
  const char* works_file;
  const char* editions_file;
  const char* out_dir;
  double threshold;
  const char* language; /* NULL = all languages */
} mjl_link_options;

typedef struct mjl_link_summary {
  size_t works, datable_works, candidates, accepted, no_language_edition, no_title_basis;
} mjl_link_summary;

MJL_API mjl_status mjl_run_link(mjl_context* ctx, const mjl_link_options* options,
                                mjl_link_summary* summary);

typedef struct mjl_eval_sample_options {
  const char* candidates_file;
  const char* works_file;
  const char* clusters_file;
  const char* plan_file;
  const char* language;
  uint64_t seed;
  double threshold;
} mjl_eval_sample_options;

MJL_API mjl_status mjl_run_eval_sample(mjl_context* ctx, const mjl_eval_sample_options* options,
                                       size_t* sampled, size_t* shortfall);

typedef struct mjl_eval_curve_options {
  const char* candidates_file;
  const char* labels_file;
  const char* out_csv;
  size_t bootstrap;
  uint64_t seed;
  const char* language; /* NULL = all */
} mjl_eval_curve_options;

typedef struct mjl_eval_curve_summary {
  size_t labeled, conclusive;
  int has_precision, has_recall;
  double precision_at_80, recall_at_80;
} mjl_eval_curve_summary;

MJL_API mjl_status mjl_run_eval_curve(mjl_context* ctx, const mjl_eval_curve_options* options,
                                      mjl_eval_curve_summary* summary);

typedef struct mjl_eval_report_options {
  const char* candidates_file;
  const char* labels_file;
  const char* relabels_file; /* optional */
  const char* out_json;
  double threshold;
} mjl_eval_report_options;

MJL_API mjl_status mjl_run_eval_report(mjl_context* ctx, const mjl_eval_report_options* options,
                                       size_t* ambiguous, int* has_secondary,
                                       double* secondary_precision);

typedef struct mjl_emit_options {
  const char* candidates_file;
  const char* works_file;
  const char* clusters_file;
  const char* out_dir;
  const char* language;
  double threshold;
} mjl_emit_options;

typedef struct mjl_emit_summary {
  size_t entries, items;
  double with_genres, with_reviews;
} mjl_emit_summary;

MJL_API mjl_status mjl_run_emit(mjl_context* ctx, const mjl_emit_options* options,
                                mjl_emit_summary* summary);

typedef struct mjl_stats_options {
  const char* shares_csv;     /* optional */
  const char* catalogue_file; /* optional */
  const char* works_file;     /* optional */
  const char* corpus;
  const char* out_dir;
} mjl_stats_options;

MJL_API mjl_status mjl_run_stats(mjl_context* ctx, const mjl_stats_options* options,
                                 size_t* files_written);

typedef struct mjl_crawl_options {
  const char* fixture_dir;
  const char* out_csv;
  size_t max_depth;
} mjl_crawl_options;

typedef struct mjl_crawl_summary {
  size_t depth, works, authors, failures;
  int exhausted;
} mjl_crawl_summary;

MJL_API mjl_status mjl_run_crawl_sim(mjl_context* ctx, const mjl_crawl_options* options,
                                     mjl_crawl_summary* summary);

typedef struct mjl_serve_options {
  const char* plan_file;  /* optional; without it tasks/next answers 409 */
  const char* labels_file;
  const char* texts_dir;
  const char* host;
  int port;
  const char* cors_origin;
  uint32_t lease_seconds;
} mjl_serve_options;

/* Blocks serving HTTP until the process is stopped. */
MJL_API mjl_status mjl_serve(mjl_context* ctx, const mjl_serve_options* options);

#ifdef __cplusplus
}
#endif

#endif /* MAJINLINK_H_ */
