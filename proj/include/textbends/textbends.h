/* C interface to the textbends library. All strings are UTF-8. Strings
 * returned through char** out-parameters are owned by the caller and must be
 * released with tb_string_free. */
#ifndef TEXTBENDS_TEXTBENDS_H
#define TEXTBENDS_TEXTBENDS_H

#include <stddef.h>
#include <stdint.h>

#if defined(TB_BUILDING_LIBRARY)
#define TB_API __attribute__((visibility("default")))
#else
#define TB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tb_status {
    TB_OK = 0,
    TB_ERR_USAGE = 1,          /* invalid configuration or arguments */
    TB_ERR_DATA = 2,           /* malformed, missing or inconsistent data */
    TB_ERR_NONDETERMINISM = 3, /* results differed across runs or engines */
    TB_ERR_INTERNAL = 4
} tb_status;

typedef struct tb_corpus tb_corpus;
typedef struct tb_report tb_report;

/* Message of the last failed call on this thread; empty after success. */
TB_API const char* tb_last_error(void);
TB_API void tb_string_free(char* s);
TB_API const char* tb_version(void);

/* config_json: generator configuration object; absent fields keep defaults.
 * NULL or "" means all defaults. */
TB_API tb_status tb_corpus_generate(const char* config_json, tb_corpus** out);
/* mode: "pretokenized" or "whitespace_lower"; NULL means pretokenized. */
TB_API tb_status tb_corpus_load_jsonl(const char* path, const char* mode, double tf_floor, tb_corpus** out);
/* check_tf = 0 skips the comparison of the stored tf column against
 * recomputed values; key integrity is always checked. */
TB_API tb_status tb_corpus_load_snowflake(const char* dir, double tf_floor, int check_tf, tb_corpus** out);
TB_API tb_status tb_corpus_save_jsonl(const tb_corpus* corpus, const char* path);
TB_API tb_status tb_corpus_export_snowflake(const tb_corpus* corpus, const char* dir);
TB_API tb_status tb_corpus_manifest_json(const tb_corpus* corpus, char** out);
TB_API uint64_t tb_corpus_document_count(const tb_corpus* corpus);
TB_API void tb_corpus_free(tb_corpus* corpus);

/* params_json: workload parameter file (pGender, pStartDate, ...); NULL or
 * "" selects the reference parameters.
 * options_json keys: schemes, engines (arrays of names), k, warm_runs,
 * cold_runs, partitions, K, k1, b, length_mode. Absent keys use defaults.
 * Returns TB_ERR_NONDETERMINISM with a populated *out when results diverged. */
TB_API tb_status tb_run(const tb_corpus* corpus, const char* params_json, const char* options_json,
                        tb_report** out);
/* config_json: generator base configuration; options_json as for tb_run plus
 * "sf_list" (array) and "cache_dir" (string). */
TB_API tb_status tb_sweep(const char* config_json, const char* params_json, const char* options_json,
                          tb_report** out);
TB_API tb_status tb_report_load(const char* path, tb_report** out);
/* format: "json", "csv" or "plotdata". NULL or "-" path writes to stdout. */
TB_API tb_status tb_report_write(const tb_report* report, const char* format, const char* path);
TB_API tb_status tb_report_render(const tb_report* report, const char* format, char** out);
TB_API size_t tb_report_result_count(const tb_report* report);
TB_API size_t tb_report_divergence_count(const tb_report* report);
TB_API int tb_report_nondeterministic(const tb_report* report);
/* Newline-separated "<query_id> <scheme> <gender> <engine> <result_checksum>". */
TB_API tb_status tb_report_checksums(const tb_report* report, char** out);
TB_API void tb_report_free(tb_report* report);

/* Runs the columnar, mapreduce and oracle executors on every spec and compares
 * rankings (1e-9 relative on scores). One "PASS <spec>" or
 * "FAIL <spec>: <reason>" line per spec is written to *out. Returns
 * TB_ERR_NONDETERMINISM when any spec fails and TB_ERR_USAGE when the corpus
 * exceeds max_docs. */
TB_API tb_status tb_verify(const tb_corpus* corpus, const char* params_json, size_t max_docs, char** out);

#ifdef __cplusplus
}
#endif

#endif
