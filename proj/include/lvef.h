#ifndef LVEF_H
#define LVEF_H

/* C interface to the LVEF estimation library.
 *
 * Every function returns LVEF_OK or an error status; lvef_last_error() holds
 * a thread-local message for the most recent failure on the calling thread.
 * Output parameters may be NULL when the caller does not need them, except
 * where noted. Strings passed in are UTF-8 file system paths.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lvef_status {
    LVEF_OK = 0,
    LVEF_ERR_NULL_ARGUMENT = 1,
    LVEF_ERR_INVALID_ARGUMENT = 2,
    LVEF_ERR_IO = 3,
    LVEF_ERR_MISSING_COLUMN = 4,
    LVEF_ERR_MALFORMED_ROW = 5,
    LVEF_ERR_EMPTY_GROUP = 6,
    LVEF_ERR_NOT_PGM = 7,
    LVEF_ERR_MISSING_FRAME = 8,
    LVEF_ERR_DIMENSION_MISMATCH = 9,
    LVEF_ERR_DEGENERATE_TRACE = 10,
    LVEF_ERR_OUT_OF_BOUNDS = 11,
    LVEF_ERR_NO_CYCLES = 12,
    LVEF_ERR_INVALID_CYCLE = 13,
    LVEF_ERR_ZERO_LENGTH = 14,
    LVEF_ERR_NON_POSITIVE_EDV = 15,
    LVEF_ERR_INSUFFICIENT_DATA = 16,
    LVEF_ERR_NON_FINITE_INPUT = 17,
    LVEF_ERR_SINGULAR_DESIGN = 18,
    LVEF_ERR_UNTRAINED_MODEL = 19,
    LVEF_ERR_VERSION_MISMATCH = 20,
    LVEF_ERR_CORRUPT_MODEL = 21,
    LVEF_ERR_FLAT_TARGET = 22,
    LVEF_ERR_ZERO_VARIANCE = 23,
    LVEF_ERR_TOO_FEW_SAMPLES = 24,
    LVEF_ERR_DEGENERATE_DIFFERENCES = 25,
    LVEF_ERR_SINGLE_CLASS = 26,
    LVEF_ERR_LENGTH_MISMATCH = 27,
    LVEF_ERR_SINGLE_CLASS_RESAMPLE = 28,
    LVEF_ERR_UNKNOWN = 99
} lvef_status;

/* Library version as "major.minor.patch". */
const char* lvef_version(void);

/* Stable identifier for a status, e.g. "no_cycles". */
const char* lvef_status_name(lvef_status status);

/* Message for the last failure on this thread; empty string if none.
 * The pointer stays valid until the next failing call on the same thread. */
const char* lvef_last_error(void);

/* ---- length model ---- */

typedef struct lvef_model lvef_model;

lvef_status lvef_model_load(const char* path, lvef_model** out_model);
lvef_status lvef_model_save(const lvef_model* model, const char* path);
void lvef_model_free(lvef_model* model);

/* Predicted LV long-axis length for one frame's mask features. */
lvef_status lvef_model_predict_length(const lvef_model* model, double area, double width,
                                      double height, double* out_length);

/* ---- pipeline configuration ---- */

typedef struct lvef_pipeline_params {
    int min_distance;           /* minimum frame gap between peaks */
    double prominence_fraction; /* of the series range, in (0,1) */
    double refine_fraction;     /* top/bottom share pooled into refined areas */
    double volume_constant;     /* area-length constant c in V = c * A^2 / L */
    int single_cycle;           /* nonzero: report the first cycle's EF */
} lvef_pipeline_params;

/* Fills in the defaults (20, 0.5, 0.1, 8/(3*pi), 0). */
void lvef_pipeline_params_init(lvef_pipeline_params* params);

/* ---- scalar operations ---- */

lvef_status lvef_volume_area_length(double area, double length, double constant,
                                    double* out_volume);
lvef_status lvef_ef_from_volumes(double edv, double esv, double* out_ef);
lvef_status lvef_cycle_ef(double ed_area, double ed_length, double es_area, double es_length,
                          double* out_ef);
lvef_status lvef_classify_hfref(double ef, int* out_hfref);

/* ---- series operations ----
 * Output arrays need capacity for n elements; *out_count receives how many
 * were written. */

lvef_status lvef_find_peaks(const double* values, size_t n, int min_distance,
                            double prominence_fraction, size_t* out_indices, size_t* out_count);

lvef_status lvef_detect_cycles(const double* areas, size_t n, int min_distance,
                               double prominence_fraction, int* out_ed_frames,
                               int* out_es_frames, size_t* out_count);

lvef_status lvef_refine_cycle_areas(const double* areas, size_t n, int ed_frame, int es_frame,
                                    double fraction, double* out_ed_area, double* out_es_area);

/* ---- video pipeline ----
 * masks_dir holds one video's frames as frame_00000.pgm, frame_00001.pgm, ...
 * out_json is optional; pass NULL to skip writing the result file. */

lvef_status lvef_predict_video(const lvef_model* model, const char* masks_dir,
                               const lvef_pipeline_params* params, const char* out_json,
                               double* out_ef, int* out_hfref);

/* ---- batch runs (what the CLI calls) ---- */

typedef void (*lvef_warning_fn)(const char* message, void* ctx);
typedef void (*lvef_video_report_fn)(const char* video_id, int ok, int no_cycles,
                                     const char* error, void* ctx);

/* Rasterizes expert tracings into per-video mask directories under
 * out_dir/masks plus out_dir/features.csv. Per-frame problems are skipped
 * and reported through `warn`. */
lvef_status lvef_run_ingest(const char* manifest_csv, const char* tracings_csv,
                            const char* out_dir, lvef_warning_fn warn, void* warn_ctx,
                            size_t* out_videos, size_t* out_frames, size_t* out_clamped_points);

/* Mask geometry for one video directory or a directory of them. */
lvef_status lvef_run_extract(const char* masks_dir, const char* out_csv, size_t* out_videos,
                             size_t* out_frames);

/* Trains the length ensemble on rows whose split matches train_split
 * (NULL or "" trains on every labeled row) and saves it to out_model.
 * out_r2 receives the k-fold cross-validated mean R^2; out_fold_r2, when
 * non-NULL, must have capacity k_folds and receives the per-fold values. */
lvef_status lvef_run_train(const char* features_csv, const char* train_split, int k_folds,
                           uint64_t seed, const char* out_model, size_t* out_samples,
                           double* out_r2, double* out_fold_r2, double* out_lasso_lambda);

/* Single-video mode (masks_dir holds frames directly): writes out_path as one
 * JSON file and returns the failure status directly. Multi-video mode: treats
 * out_path as a directory, processes videos on `jobs` threads, reports each
 * video through `report`, and returns LVEF_OK even when some videos fail.
 * cycles_csv is optional and only applies to single-video mode. */
lvef_status lvef_run_predict(const char* masks_dir, const char* model_path,
                             const char* out_path, const lvef_pipeline_params* params, int jobs,
                             const char* cycles_csv, lvef_video_report_fn report,
                             void* report_ctx, size_t* out_ok, size_t* out_failed);

/* Joins predictions (result JSON directory, or CSV with video_id +
 * predicted_ef) against a label CSV and writes the statistics report. */
lvef_status lvef_run_evaluate(const char* predictions_path, const char* labels_path,
                              int n_resamples, uint64_t seed, const char* out_report,
                              size_t* out_pairs, int* out_has_t_test);

/* Beat-to-beat SVG from a result JSON plus the matching area CSV. */
lvef_status lvef_run_visualize(const char* result_json, const char* areas_csv,
                               const char* out_svg);

#ifdef __cplusplus
}
#endif

#endif /* LVEF_H */
