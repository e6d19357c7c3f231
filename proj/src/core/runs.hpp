#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/ensemble.hpp"
#include "core/pipeline.hpp"

namespace lvef {

struct IngestSummary {
    std::size_t videos = 0;
    std::size_t frames = 0;
    std::size_t clamped_points = 0;
    std::vector<std::string> warnings;
};

// Rasterizes every traced frame to out_dir/masks/<video>/frame_XXXXX.pgm and
// writes out_dir/features.csv with geometry, the traced LV length, and the
// manifest split. Coordinates that poke outside the frame are clamped onto
// it (counted in the summary).
IngestSummary ingest_run(const std::string& manifest_path, const std::string& tracings_path,
                         const std::string& out_dir);

struct ExtractSummary {
    std::size_t videos = 0;
    std::size_t frames = 0;
};

// masks_dir is one video's frame directory, or a directory of such
// directories; all features land in a single CSV.
ExtractSummary extract_run(const std::string& masks_dir, const std::string& out_csv);

struct TrainSummary {
    std::size_t samples = 0;
    KfoldResult r2;
    double lasso_lambda = 0.0;
};

// train_split filters rows on the CSV split column when non-empty
// (train/val/test, case-insensitive).
TrainSummary train_run(const std::string& features_csv, const std::string& train_split,
                       int k_folds, std::uint64_t seed, const std::string& out_model);

struct PredictOutcome {
    std::string video_id;
    bool ok = false;
    bool no_cycles = false;
    std::string error;
    VideoResult result;
};

// Single-video mode (masks_dir holds frame_*.pgm directly) writes out_path
// as one JSON file and lets failures propagate. Multi-video mode treats
// out_path as a directory, fans videos out over `jobs` threads, and records
// per-video failures in the outcomes instead of throwing.
std::vector<PredictOutcome> predict_run(const std::string& masks_dir,
                                        const std::string& model_path,
                                        const std::string& out_path,
                                        const PipelineConfig& config, int jobs,
                                        const std::string& cycles_out = "");

struct EvaluateSummary {
    std::size_t pairs = 0;
    bool has_t_test = false;
};

// predictions_path: a directory of result JSON files, or a CSV with
// video_id + predicted_ef (optional predicted_ef_first for the paired
// t-test). labels_path: CSV with video_id/FileName + label_ef/EF.
EvaluateSummary evaluate_run(const std::string& predictions_path, const std::string& labels_path,
                             int n_resamples, std::uint64_t seed, const std::string& out_report);

// areas_path: CSV with an area column (frame_index and video_id optional,
// e.g. the extract output); result_path: a predict result JSON.
void visualize_run(const std::string& result_path, const std::string& areas_path,
                   const std::string& out_svg);

} // namespace lvef
