/* C interface to the cococrola core.
 *
 * Every function returns a ccl_status. On failure the message is available
 * from ccl_last_error() on the calling thread until the next call. Handles are
 * opaque and owned by the caller once returned; release them with the
 * matching *_free function.
 */
#ifndef COCOCROLA_H
#define COCOCROLA_H

#include <stddef.h>
#include <stdint.h>

#if defined(COCOCROLA_BUILDING_LIBRARY)
#define CCL_API __attribute__((visibility("default")))
#else
#define CCL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ccl_status {
  CCL_OK = 0,
  CCL_ERR_INVALID_ARGUMENT = 1,
  CCL_ERR_CONFIG = 2,
  CCL_ERR_IO = 3,
  CCL_ERR_FORMAT = 4,
  CCL_ERR_PIPELINE = 5,
  CCL_ERR_INTERNAL = 6,
  CCL_ERR_INTERRUPTED = 7
} ccl_status;

CCL_API const char* ccl_version(void);
CCL_API const char* ccl_status_name(ccl_status status);
CCL_API const char* ccl_last_error(void);

/* Progress and warning lines from the subcommand drivers. */
typedef void (*ccl_log_fn)(const char* message, void* user);

/* ---- configuration ---- */

typedef struct ccl_config ccl_config;

CCL_API ccl_status ccl_config_load(const char* path, ccl_config** out);
/* base_dir anchors relative paths; NULL means the working directory. */
CCL_API ccl_status ccl_config_parse(const char* json, const char* base_dir, ccl_config** out);
CCL_API void ccl_config_free(ccl_config* config);
CCL_API size_t ccl_config_language_count(const ccl_config* config);
CCL_API const char* ccl_config_language(const ccl_config* config, size_t i);
CCL_API const char* ccl_config_source_language(const ccl_config* config);

/* ---- subcommands ----
 * Zero-initialized argument structs select the config defaults. */

typedef struct ccl_build_concepts_args {
  const char* fixtures_dir; /* replay recorded responses from this directory */
  const char* denylist_path;
  const char* out_path;
} ccl_build_concepts_args;

CCL_API ccl_status ccl_build_concepts(const ccl_config* config, const ccl_build_concepts_args* args, ccl_log_fn log,
                                      void* user);

typedef struct ccl_generate_args {
  const char* model;
  const char* adapter_url;
  int stub;
  uint32_t images_per_concept; /* 0: config value */
  int resume;
  const char* variant;
  const char* concepts_path;
  const char* languages; /* comma-separated subset, or NULL */
  size_t concept_limit;  /* 0: every concept */
} ccl_generate_args;

/* Returns CCL_ERR_INTERRUPTED if ccl_request_stop() ended the run early; the
 * manifest then records the progress and --resume continues it. */
CCL_API ccl_status ccl_generate(const ccl_config* config, const ccl_generate_args* args, ccl_log_fn log, void* user);
/* Async-signal-safe. */
CCL_API void ccl_request_stop(void);
CCL_API void ccl_reset_stop(void);

typedef struct ccl_embed_args {
  const char* run_dir;
  const char* embedder_cmd;
  const char* concepts_path;
  const char* source_lang;
} ccl_embed_args;

CCL_API ccl_status ccl_embed(const ccl_config* config, const ccl_embed_args* args, ccl_log_fn log, void* user);

typedef struct ccl_score_args {
  const char* run_dir;
  const char* source_lang;
  const char* dt_mode; /* "sampled" or "exhaustive" */
  const char* out_path;
} ccl_score_args;

CCL_API ccl_status ccl_score(const ccl_config* config, const ccl_score_args* args, ccl_log_fn log, void* user);

typedef struct ccl_report_args {
  const char* const* tables;
  size_t table_count;
  const char* formats; /* comma-separated subset of csv,json,html; NULL for all */
  const char* out_dir;
} ccl_report_args;

CCL_API ccl_status ccl_report(const ccl_config* config, const ccl_report_args* args, ccl_log_fn log, void* user);

/* ---- embedding files ---- */

typedef enum ccl_set_kind { CCL_SET_IMAGE = 0, CCL_SET_TEXT = 1 } ccl_set_kind;

typedef struct ccl_embeddings ccl_embeddings;

CCL_API ccl_status ccl_embeddings_create(ccl_set_kind kind, size_t dim, ccl_embeddings** out);
CCL_API void ccl_embeddings_free(ccl_embeddings* set);
/* Appends one row; with normalize != 0 the vector is scaled to unit length. */
CCL_API ccl_status ccl_embeddings_add_image(ccl_embeddings* set, const char* concept_id, const char* language,
                                            uint32_t index, const float* vec, int normalize);
CCL_API ccl_status ccl_embeddings_add_text(ccl_embeddings* set, const char* concept_id, const float* vec,
                                           int normalize);
/* Writes the binary file and its .keys.json sidecar after validation. */
CCL_API ccl_status ccl_embeddings_write(const ccl_embeddings* set, const char* path);
CCL_API ccl_status ccl_embeddings_read(const char* path, ccl_set_kind kind, ccl_embeddings** out);
CCL_API size_t ccl_embeddings_count(const ccl_embeddings* set);
CCL_API size_t ccl_embeddings_dim(const ccl_embeddings* set);
CCL_API const float* ccl_embeddings_row(const ccl_embeddings* set, size_t i);
/* Image sets fill all three outputs; text sets only concept_id. */
CCL_API ccl_status ccl_embeddings_key(const ccl_embeddings* set, size_t i, const char** concept_id,
                                      const char** language, uint32_t* index);

/* ---- metrics on row-major float arrays ---- */

CCL_API ccl_status ccl_cosine(const float* a, const float* b, size_t dim, double* out);
CCL_API ccl_status ccl_self_consistency(const float* rows, size_t n, size_t dim, double* out);
CCL_API ccl_status ccl_cross_consistency(const float* target, size_t n_target, const float* source, size_t n_source,
                                         size_t dim, double* out);
CCL_API ccl_status ccl_word_correctness(const float* text, const float* rows, size_t n, size_t dim, int renormalize,
                                        double* out);
/* pool_rows holds pool_concepts blocks back to back; pool_counts[c] rows each.
 * samples == 0 selects the default draw count. */
CCL_API ccl_status ccl_inverse_distinctiveness(const float* rows, size_t n, const float* pool_rows,
                                               const size_t* pool_counts, size_t pool_concepts, size_t dim,
                                               int exhaustive, size_t samples, uint64_t seed, double* out);

typedef enum ccl_possession_rule { CCL_RULE_EITHER = 0, CCL_RULE_BOTH = 1 } ccl_possession_rule;

CCL_API ccl_status ccl_classify_possession(double xc, double wc, double xc_threshold, double wc_threshold,
                                           ccl_possession_rule rule, int* possessed);
/* x100, rounded half away from zero. */
CCL_API long long ccl_percent(double raw);

#ifdef __cplusplus
}
#endif

#endif /* COCOCROLA_H */
