#ifndef EUDS_H
#define EUDS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define EUDS_API __declspec(dllexport)
#else
#define EUDS_API __attribute__((visibility("default")))
#endif

/* Status codes. Zero is success; nonzero values double as CLI exit codes. */
enum {
    EUDS_OK = 0,
    EUDS_ERR_CONFIG = 2,
    EUDS_ERR_DATA = 3,
    EUDS_ERR_EVALUATOR = 4
};

typedef struct euds_dataset euds_dataset;
typedef struct euds_scores euds_scores;
typedef struct euds_selection euds_selection;

EUDS_API const char* euds_version(void);

/* Message from the last failing call on this thread. */
EUDS_API const char* euds_last_error(void);

/* Releases a string handed out through a char** out-parameter. */
EUDS_API void euds_string_free(char* s);

/* Datasets are JSONL files with one sample per line. `source` is "original"
 * or "synthetic". */
EUDS_API int euds_dataset_load(const char* path, const char* source,
                               euds_dataset** out);
EUDS_API int euds_dataset_save(const euds_dataset* d, const char* path);
EUDS_API void euds_dataset_free(euds_dataset* d);
EUDS_API size_t euds_dataset_size(const euds_dataset* d);
/* Borrowed pointers, valid while the dataset lives. NULL when out of range. */
EUDS_API const char* euds_dataset_id(const euds_dataset* d, size_t index);
EUDS_API const char* euds_dataset_label(const euds_dataset* d, size_t index);
EUDS_API const char* euds_dataset_text(const euds_dataset* d, size_t index);
EUDS_API int euds_dataset_merge(const euds_dataset* a, const euds_dataset* b,
                                euds_dataset** out);
EUDS_API int euds_dataset_split(const euds_dataset* d, double train_ratio,
                                double val_ratio, double test_ratio, uint64_t seed,
                                euds_dataset** out_train, euds_dataset** out_val,
                                euds_dataset** out_test);

/* Computes raw entropies for every sample. `types` is a comma-separated list
 * drawn from ie, ge, se. */
EUDS_API int euds_scores_compute(const euds_dataset* d, const char* types,
                                 euds_scores** out);
EUDS_API void euds_scores_free(euds_scores* s);
/* Raw bits in dataset order; `out` must hold euds_dataset_size values. */
EUDS_API int euds_scores_raw(const euds_scores* s, const char* type, double* out,
                             size_t size);
/* Normalized onto [0, 10]; `method` is "minmax" or "percentile". */
EUDS_API int euds_scores_normalized(const euds_scores* s, const char* type,
                                    const char* method, double* out, size_t size);

/* Keeps samples whose normalized score falls in `interval` (a catalog label
 * like "3-10", or "lo:hi"). `normalized` is aligned with dataset order. */
EUDS_API int euds_select(const euds_dataset* d, const char* type,
                         const double* normalized, size_t size,
                         const char* interval, euds_selection** out);
EUDS_API void euds_selection_free(euds_selection* s);
EUDS_API size_t euds_selection_size(const euds_selection* s);
EUDS_API double euds_selection_reduction_pct(const euds_selection* s);
EUDS_API int euds_selection_materialize(const euds_dataset* d,
                                        const euds_selection* s,
                                        euds_dataset** out);
/* Manifest as a JSON string; free with euds_string_free. */
EUDS_API int euds_selection_manifest(const euds_selection* s, uint64_t seed,
                                     int subset_derived, char** out_json);

/* Full original pool plus the selected synthetic samples. */
EUDS_API int euds_build_sumdata(const euds_dataset* ori, const euds_dataset* syn,
                                const euds_selection* syn_sel, euds_dataset** out);
/* Selected original plus selected synthetic. `mode` is "same_interval" or
 * "independent". */
EUDS_API int euds_build_joseldata(const euds_dataset* ori,
                                  const euds_selection* ori_sel,
                                  const euds_dataset* syn,
                                  const euds_selection* syn_sel, const char* mode,
                                  euds_dataset** out);

/* 100 * (1 - selected/original), rounded half-up to two decimals. */
EUDS_API int euds_reduction_pct(size_t original_count, size_t selected_count,
                                double* out);

/* Writes a bin,count histogram of normalized scores to `path`. */
EUDS_API int euds_emit_distribution(const double* normalized, size_t size, int bins,
                                    const char* path);

/* Runs the full workflow. `mode` is score, select, search, mix, or run;
 * `config_json` is the configuration object. On success *out_report_json
 * holds the run report; free with euds_string_free. */
EUDS_API int euds_run_pipeline(const char* mode, const char* config_json,
                               char** out_report_json);

/* Renders a stored run report as text; free with euds_string_free. */
EUDS_API int euds_render_report(const char* report_json, char** out_text);

#ifdef __cplusplus
}
#endif

#endif
