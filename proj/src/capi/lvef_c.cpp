#include "lvef.h"

#include <exception>
#include <string>
#include <utility>
#include <vector>

#include "core/cycles.hpp"
#include "core/dataset.hpp"
#include "core/ensemble.hpp"
#include "core/errors.hpp"
#include "core/pipeline.hpp"
#include "core/refine.hpp"
#include "core/runs.hpp"

namespace {

thread_local std::string g_last_error;

lvef_status map_errc(lvef::errc code) {
    using lvef::errc;
    switch (code) {
        case errc::invalid_argument: return LVEF_ERR_INVALID_ARGUMENT;
        case errc::io_error: return LVEF_ERR_IO;
        case errc::missing_column: return LVEF_ERR_MISSING_COLUMN;
        case errc::malformed_row: return LVEF_ERR_MALFORMED_ROW;
        case errc::empty_group: return LVEF_ERR_EMPTY_GROUP;
        case errc::not_pgm: return LVEF_ERR_NOT_PGM;
        case errc::missing_frame: return LVEF_ERR_MISSING_FRAME;
        case errc::dimension_mismatch: return LVEF_ERR_DIMENSION_MISMATCH;
        case errc::degenerate_trace: return LVEF_ERR_DEGENERATE_TRACE;
        case errc::out_of_bounds: return LVEF_ERR_OUT_OF_BOUNDS;
        case errc::no_cycles: return LVEF_ERR_NO_CYCLES;
        case errc::invalid_cycle: return LVEF_ERR_INVALID_CYCLE;
        case errc::zero_length: return LVEF_ERR_ZERO_LENGTH;
        case errc::non_positive_edv: return LVEF_ERR_NON_POSITIVE_EDV;
        case errc::insufficient_data: return LVEF_ERR_INSUFFICIENT_DATA;
        case errc::non_finite_input: return LVEF_ERR_NON_FINITE_INPUT;
        case errc::singular_design: return LVEF_ERR_SINGULAR_DESIGN;
        case errc::untrained_model: return LVEF_ERR_UNTRAINED_MODEL;
        case errc::version_mismatch: return LVEF_ERR_VERSION_MISMATCH;
        case errc::corrupt_model: return LVEF_ERR_CORRUPT_MODEL;
        case errc::flat_target: return LVEF_ERR_FLAT_TARGET;
        case errc::zero_variance: return LVEF_ERR_ZERO_VARIANCE;
        case errc::too_few_samples: return LVEF_ERR_TOO_FEW_SAMPLES;
        case errc::degenerate_differences: return LVEF_ERR_DEGENERATE_DIFFERENCES;
        case errc::single_class: return LVEF_ERR_SINGLE_CLASS;
        case errc::length_mismatch: return LVEF_ERR_LENGTH_MISMATCH;
        case errc::single_class_resample: return LVEF_ERR_SINGLE_CLASS_RESAMPLE;
    }
    return LVEF_ERR_UNKNOWN;
}

template <typename F>
lvef_status guarded(F&& body) noexcept {
    try {
        body();
        g_last_error.clear();
        return LVEF_OK;
    } catch (const lvef::Error& e) {
        g_last_error = e.what();
        return map_errc(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return LVEF_ERR_UNKNOWN;
    } catch (...) {
        g_last_error = "unknown failure";
        return LVEF_ERR_UNKNOWN;
    }
}

lvef_status null_argument(const char* what) {
    g_last_error = std::string(what) + " must not be NULL";
    return LVEF_ERR_NULL_ARGUMENT;
}

template <typename T>
void put(T* out, const T& value) {
    if (out) *out = value;
}

lvef::PipelineConfig to_config(const lvef_pipeline_params* params) {
    lvef::PipelineConfig config;
    if (params) {
        config.peaks.min_distance = params->min_distance;
        config.peaks.prominence_fraction = params->prominence_fraction;
        config.jeffrey_fraction = params->refine_fraction;
        config.volume_constant.c = params->volume_constant;
        config.single_cycle = params->single_cycle != 0;
    }
    return config;
}

} // namespace

extern "C" {

struct lvef_model {
    lvef::LengthModel impl;
};

const char* lvef_version(void) { return "1.0.0"; }

const char* lvef_status_name(lvef_status status) {
    switch (status) {
        case LVEF_OK: return "ok";
        case LVEF_ERR_NULL_ARGUMENT: return "null_argument";
        case LVEF_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case LVEF_ERR_IO: return "io_error";
        case LVEF_ERR_MISSING_COLUMN: return "missing_column";
        case LVEF_ERR_MALFORMED_ROW: return "malformed_row";
        case LVEF_ERR_EMPTY_GROUP: return "empty_group";
        case LVEF_ERR_NOT_PGM: return "not_pgm";
        case LVEF_ERR_MISSING_FRAME: return "missing_frame";
        case LVEF_ERR_DIMENSION_MISMATCH: return "dimension_mismatch";
        case LVEF_ERR_DEGENERATE_TRACE: return "degenerate_trace";
        case LVEF_ERR_OUT_OF_BOUNDS: return "out_of_bounds";
        case LVEF_ERR_NO_CYCLES: return "no_cycles";
        case LVEF_ERR_INVALID_CYCLE: return "invalid_cycle";
        case LVEF_ERR_ZERO_LENGTH: return "zero_length";
        case LVEF_ERR_NON_POSITIVE_EDV: return "non_positive_edv";
        case LVEF_ERR_INSUFFICIENT_DATA: return "insufficient_data";
        case LVEF_ERR_NON_FINITE_INPUT: return "non_finite_input";
        case LVEF_ERR_SINGULAR_DESIGN: return "singular_design";
        case LVEF_ERR_UNTRAINED_MODEL: return "untrained_model";
        case LVEF_ERR_VERSION_MISMATCH: return "version_mismatch";
        case LVEF_ERR_CORRUPT_MODEL: return "corrupt_model";
        case LVEF_ERR_FLAT_TARGET: return "flat_target";
        case LVEF_ERR_ZERO_VARIANCE: return "zero_variance";
        case LVEF_ERR_TOO_FEW_SAMPLES: return "too_few_samples";
        case LVEF_ERR_DEGENERATE_DIFFERENCES: return "degenerate_differences";
        case LVEF_ERR_SINGLE_CLASS: return "single_class";
        case LVEF_ERR_LENGTH_MISMATCH: return "length_mismatch";
        case LVEF_ERR_SINGLE_CLASS_RESAMPLE: return "single_class_resample";
        case LVEF_ERR_UNKNOWN: return "unknown";
    }
    return "unknown";
}

const char* lvef_last_error(void) { return g_last_error.c_str(); }

lvef_status lvef_model_load(const char* path, lvef_model** out_model) {
    if (!path) return null_argument("path");
    if (!out_model) return null_argument("out_model");
    *out_model = nullptr;
    return guarded([&] {
        auto handle = new lvef_model{lvef::load_model(path)};
        *out_model = handle;
    });
}

lvef_status lvef_model_save(const lvef_model* model, const char* path) {
    if (!model) return null_argument("model");
    if (!path) return null_argument("path");
    return guarded([&] { lvef::save_model(model->impl, path); });
}

void lvef_model_free(lvef_model* model) { delete model; }

lvef_status lvef_model_predict_length(const lvef_model* model, double area, double width,
                                      double height, double* out_length) {
    if (!model) return null_argument("model");
    if (!out_length) return null_argument("out_length");
    return guarded([&] {
        *out_length = lvef::predict_length(model->impl, {area, width, height});
    });
}

void lvef_pipeline_params_init(lvef_pipeline_params* params) {
    if (!params) return;
    const lvef::PipelineConfig defaults;
    params->min_distance = defaults.peaks.min_distance;
    params->prominence_fraction = defaults.peaks.prominence_fraction;
    params->refine_fraction = defaults.jeffrey_fraction;
    params->volume_constant = defaults.volume_constant.c;
    params->single_cycle = 0;
}

lvef_status lvef_volume_area_length(double area, double length, double constant,
                                    double* out_volume) {
    if (!out_volume) return null_argument("out_volume");
    return guarded([&] {
        *out_volume = lvef::volume_area_length(area, length, lvef::VolumeConstant{constant});
    });
}

lvef_status lvef_ef_from_volumes(double edv, double esv, double* out_ef) {
    if (!out_ef) return null_argument("out_ef");
    return guarded([&] { *out_ef = lvef::ef_from_volumes(edv, esv); });
}

lvef_status lvef_cycle_ef(double ed_area, double ed_length, double es_area, double es_length,
                          double* out_ef) {
    if (!out_ef) return null_argument("out_ef");
    return guarded([&] { *out_ef = lvef::cycle_ef(ed_area, ed_length, es_area, es_length); });
}

lvef_status lvef_classify_hfref(double ef, int* out_hfref) {
    if (!out_hfref) return null_argument("out_hfref");
    return guarded([&] { *out_hfref = lvef::classify_hfref(ef) ? 1 : 0; });
}

lvef_status lvef_find_peaks(const double* values, size_t n, int min_distance,
                            double prominence_fraction, size_t* out_indices, size_t* out_count) {
    if (!values && n > 0) return null_argument("values");
    if (!out_indices && n > 0) return null_argument("out_indices");
    if (!out_count) return null_argument("out_count");
    return guarded([&] {
        const std::vector<double> series(values, values + n);
        const auto peaks =
            lvef::find_peaks(series, lvef::PeakParams{min_distance, prominence_fraction});
        for (size_t i = 0; i < peaks.size(); ++i) {
            out_indices[i] = static_cast<size_t>(peaks[i]);
        }
        *out_count = peaks.size();
    });
}

lvef_status lvef_detect_cycles(const double* areas, size_t n, int min_distance,
                               double prominence_fraction, int* out_ed_frames,
                               int* out_es_frames, size_t* out_count) {
    if (!areas && n > 0) return null_argument("areas");
    if ((!out_ed_frames || !out_es_frames) && n > 0) return null_argument("out frame arrays");
    if (!out_count) return null_argument("out_count");
    return guarded([&] {
        lvef::AreaSeries series;
        series.areas.assign(areas, areas + n);
        const auto cycles =
            lvef::detect_cycles(series, lvef::PeakParams{min_distance, prominence_fraction});
        for (size_t i = 0; i < cycles.size(); ++i) {
            out_ed_frames[i] = cycles[i].ed_frame;
            out_es_frames[i] = cycles[i].es_frame;
        }
        *out_count = cycles.size();
    });
}

lvef_status lvef_refine_cycle_areas(const double* areas, size_t n, int ed_frame, int es_frame,
                                    double fraction, double* out_ed_area, double* out_es_area) {
    if (!areas && n > 0) return null_argument("areas");
    if (!out_ed_area) return null_argument("out_ed_area");
    if (!out_es_area) return null_argument("out_es_area");
    return guarded([&] {
        lvef::AreaSeries series;
        series.areas.assign(areas, areas + n);
        const auto [ed, es] =
            lvef::refine_cycle_areas(series, lvef::CardiacCycle{ed_frame, es_frame}, fraction);
        *out_ed_area = ed;
        *out_es_area = es;
    });
}

lvef_status lvef_predict_video(const lvef_model* model, const char* masks_dir,
                               const lvef_pipeline_params* params, const char* out_json,
                               double* out_ef, int* out_hfref) {
    if (!model) return null_argument("model");
    if (!masks_dir) return null_argument("masks_dir");
    return guarded([&] {
        const lvef::MaskSequence seq = lvef::read_mask_sequence(masks_dir);
        const lvef::VideoResult result =
            lvef::run_pipeline(seq, model->impl, to_config(params));
        if (out_json) lvef::write_result_json(out_json, result);
        put(out_ef, result.ef);
        put(out_hfref, result.hfref ? 1 : 0);
    });
}

lvef_status lvef_run_ingest(const char* manifest_csv, const char* tracings_csv,
                            const char* out_dir, lvef_warning_fn warn, void* warn_ctx,
                            size_t* out_videos, size_t* out_frames, size_t* out_clamped_points) {
    if (!manifest_csv) return null_argument("manifest_csv");
    if (!tracings_csv) return null_argument("tracings_csv");
    if (!out_dir) return null_argument("out_dir");
    return guarded([&] {
        const lvef::IngestSummary summary = lvef::ingest_run(manifest_csv, tracings_csv, out_dir);
        if (warn) {
            for (const std::string& message : summary.warnings) {
                warn(message.c_str(), warn_ctx);
            }
        }
        put(out_videos, summary.videos);
        put(out_frames, summary.frames);
        put(out_clamped_points, summary.clamped_points);
    });
}

lvef_status lvef_run_extract(const char* masks_dir, const char* out_csv, size_t* out_videos,
                             size_t* out_frames) {
    if (!masks_dir) return null_argument("masks_dir");
    if (!out_csv) return null_argument("out_csv");
    return guarded([&] {
        const lvef::ExtractSummary summary = lvef::extract_run(masks_dir, out_csv);
        put(out_videos, summary.videos);
        put(out_frames, summary.frames);
    });
}

lvef_status lvef_run_train(const char* features_csv, const char* train_split, int k_folds,
                           uint64_t seed, const char* out_model, size_t* out_samples,
                           double* out_r2, double* out_fold_r2, double* out_lasso_lambda) {
    if (!features_csv) return null_argument("features_csv");
    if (!out_model) return null_argument("out_model");
    return guarded([&] {
        const lvef::TrainSummary summary = lvef::train_run(
            features_csv, train_split ? train_split : "", k_folds, seed, out_model);
        put(out_samples, summary.samples);
        put(out_r2, summary.r2.mean);
        if (out_fold_r2) {
            for (std::size_t i = 0; i < summary.r2.per_fold.size(); ++i) {
                out_fold_r2[i] = summary.r2.per_fold[i];
            }
        }
        put(out_lasso_lambda, summary.lasso_lambda);
    });
}

lvef_status lvef_run_predict(const char* masks_dir, const char* model_path,
                             const char* out_path, const lvef_pipeline_params* params, int jobs,
                             const char* cycles_csv, lvef_video_report_fn report,
                             void* report_ctx, size_t* out_ok, size_t* out_failed) {
    if (!masks_dir) return null_argument("masks_dir");
    if (!model_path) return null_argument("model_path");
    if (!out_path) return null_argument("out_path");
    return guarded([&] {
        const auto outcomes =
            lvef::predict_run(masks_dir, model_path, out_path, to_config(params), jobs,
                              cycles_csv ? cycles_csv : "");
        size_t n_ok = 0;
        size_t n_failed = 0;
        for (const lvef::PredictOutcome& outcome : outcomes) {
            if (outcome.ok) {
                ++n_ok;
            } else {
                ++n_failed;
            }
            if (report) {
                report(outcome.video_id.c_str(), outcome.ok ? 1 : 0,
                       outcome.no_cycles ? 1 : 0, outcome.error.c_str(), report_ctx);
            }
        }
        put(out_ok, n_ok);
        put(out_failed, n_failed);
    });
}

lvef_status lvef_run_evaluate(const char* predictions_path, const char* labels_path,
                              int n_resamples, uint64_t seed, const char* out_report,
                              size_t* out_pairs, int* out_has_t_test) {
    if (!predictions_path) return null_argument("predictions_path");
    if (!labels_path) return null_argument("labels_path");
    if (!out_report) return null_argument("out_report");
    return guarded([&] {
        const lvef::EvaluateSummary summary =
            lvef::evaluate_run(predictions_path, labels_path, n_resamples, seed, out_report);
        put(out_pairs, summary.pairs);
        put(out_has_t_test, summary.has_t_test ? 1 : 0);
    });
}

lvef_status lvef_run_visualize(const char* result_json, const char* areas_csv,
                               const char* out_svg) {
    if (!result_json) return null_argument("result_json");
    if (!areas_csv) return null_argument("areas_csv");
    if (!out_svg) return null_argument("out_svg");
    return guarded([&] { lvef::visualize_run(result_json, areas_csv, out_svg); });
}

} // extern "C"
