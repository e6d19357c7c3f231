#include "core/runs.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <thread>

#include "json.hpp"

#include "core/csv.hpp"
#include "core/errors.hpp"
#include "core/geometry.hpp"
#include "core/io.hpp"
#include "core/refine.hpp"
#include "core/stats.hpp"
#include "core/svg.hpp"

namespace lvef {

namespace fs = std::filesystem;

namespace {

using nlohmann::json;

std::string frame_file_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%05d.pgm", index);
    return buf;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Pulls stray tracing coordinates back onto the frame; EchoNet traces touch
// the image border now and then, and the rasterizer is strict about bounds.
std::size_t clamp_trace(TraceFrame& trace, int width, int height) {
    const double max_x = std::nextafter(static_cast<double>(width), 0.0);
    const double max_y = std::nextafter(static_cast<double>(height), 0.0);
    std::size_t clamped = 0;
    auto fix = [&](Point& p) {
        const Point before = p;
        p.x = std::clamp(p.x, 0.0, max_x);
        p.y = std::clamp(p.y, 0.0, max_y);
        if (p.x != before.x || p.y != before.y) ++clamped;
    };
    for (Segment& s : trace.segments) {
        fix(s.p1);
        fix(s.p2);
    }
    return clamped;
}

bool has_frame_files(const std::string& dir) {
    if (!fs::is_directory(dir)) return false;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (name.starts_with("frame_") && name.ends_with(".pgm")) return true;
    }
    return false;
}

std::vector<std::string> video_subdirs(const std::string& dir) {
    if (!fs::is_directory(dir)) {
        fail(errc::io_error, "'" + dir + "' is not a readable directory");
    }
    std::vector<std::string> subdirs;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_directory() && has_frame_files(entry.path().string())) {
            subdirs.push_back(entry.path().string());
        }
    }
    std::sort(subdirs.begin(), subdirs.end());
    return subdirs;
}

std::vector<FeatureRow> features_of_sequence(const MaskSequence& seq) {
    std::vector<FeatureRow> rows;
    rows.reserve(seq.frames.size());
    for (std::size_t i = 0; i < seq.frames.size(); ++i) {
        const LvFrameFeatures f = extract_features(seq.frames[i], static_cast<int>(i));
        FeatureRow row;
        row.video_id = seq.video_id;
        row.frame_index = f.frame_index;
        row.area = f.area;
        row.width = f.width;
        row.height = f.height;
        rows.push_back(std::move(row));
    }
    return rows;
}

// Accepts train/val/test plus the long names used in manifests.
std::string canonical_split(const std::string& raw) {
    const std::string s = lower(raw);
    if (s == "train" || s == "training") return "train";
    if (s == "val" || s == "validation") return "val";
    if (s == "test" || s == "testing") return "test";
    return s;
}

struct LabeledEf {
    std::string video_id;
    double predicted = 0.0;
    double predicted_first = std::numeric_limits<double>::quiet_NaN();
};

std::vector<LabeledEf> load_predictions(const std::string& path) {
    std::vector<LabeledEf> rows;
    if (fs::is_directory(path)) {
        std::vector<std::string> files;
        for (const auto& entry : fs::directory_iterator(path)) {
            if (entry.is_regular_file() && entry.path().extension() == ".json") {
                files.push_back(entry.path().string());
            }
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) {
            fail(errc::invalid_argument, "no result JSON files in '" + path + "'");
        }
        for (const std::string& file : files) {
            const VideoResult r = read_result_json(file);
            rows.push_back({normalize_video_id(r.video_id), r.ef_all_cycles, r.ef_first_cycle});
        }
        return rows;
    }

    const csv::Table table = csv::read_file(path);
    const std::size_t c_id = table.require_column("video_id");
    const std::size_t c_pred = table.require_column("predicted_ef");
    const std::optional<std::size_t> c_first = table.column("predicted_ef_first");
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& cells = table.rows[i];
        const std::size_t line = table.line_numbers[i];
        LabeledEf row;
        row.video_id = normalize_video_id(cells[c_id]);
        row.predicted = csv::parse_double(cells[c_pred], line, "predicted_ef");
        if (c_first && !cells[*c_first].empty()) {
            row.predicted_first = csv::parse_double(cells[*c_first], line, "predicted_ef_first");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::map<std::string, double> load_labels(const std::string& path) {
    const csv::Table table = csv::read_file(path);
    std::optional<std::size_t> c_id = table.column("video_id");
    if (!c_id) c_id = table.column("FileName");
    if (!c_id) table.require_column("video_id"); // throws with the preferred name
    std::optional<std::size_t> c_ef = table.column("label_ef");
    if (!c_ef) c_ef = table.column("EF");
    if (!c_ef) table.require_column("label_ef");

    std::map<std::string, double> labels;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& cells = table.rows[i];
        const std::size_t line = table.line_numbers[i];
        labels[normalize_video_id(cells[*c_id])] =
            csv::parse_double(cells[*c_ef], line, "label_ef");
    }
    return labels;
}

} // namespace

IngestSummary ingest_run(const std::string& manifest_path, const std::string& tracings_path,
                         const std::string& out_dir) {
    const std::vector<VideoRecord> records = parse_manifest(manifest_path);
    const auto traces = parse_tracings(tracings_path);

    std::map<std::string, const VideoRecord*> by_id;
    for (const VideoRecord& rec : records) by_id[rec.file_name] = &rec;

    fs::create_directories(fs::path(out_dir) / "masks");

    IngestSummary summary;
    std::vector<FeatureRow> features;
    for (const auto& [video_id, frames] : traces) {
        const auto found = by_id.find(video_id);
        if (found == by_id.end()) {
            summary.warnings.push_back("no manifest row for '" + video_id + "', skipped");
            continue;
        }
        const VideoRecord& rec = *found->second;
        const fs::path video_dir = fs::path(out_dir) / "masks" / video_id;
        fs::create_directories(video_dir);
        bool wrote_any = false;
        for (const TraceFrame& original : frames) {
            TraceFrame trace = original;
            summary.clamped_points += clamp_trace(trace, rec.frame_width, rec.frame_height);
            try {
                const Polygon poly = polygon_from_trace(trace);
                const Mask mask = rasterize_polygon(poly, rec.frame_width, rec.frame_height);
                const LvFrameFeatures f = extract_features(mask, trace.frame_index);
                write_pgm(mask, (video_dir / frame_file_name(trace.frame_index)).string());
                FeatureRow row;
                row.video_id = video_id;
                row.frame_index = trace.frame_index;
                row.area = f.area;
                row.width = f.width;
                row.height = f.height;
                row.length = trace_length(trace);
                row.split = split_name(rec.split);
                features.push_back(std::move(row));
                ++summary.frames;
                wrote_any = true;
            } catch (const Error& e) {
                summary.warnings.push_back("'" + video_id + "' frame " +
                                           std::to_string(trace.frame_index) + ": " + e.what());
            }
        }
        if (wrote_any) ++summary.videos;
    }
    write_features_csv((fs::path(out_dir) / "features.csv").string(), features);
    return summary;
}

ExtractSummary extract_run(const std::string& masks_dir, const std::string& out_csv) {
    ExtractSummary summary;
    std::vector<FeatureRow> rows;
    if (has_frame_files(masks_dir)) {
        const MaskSequence seq = read_mask_sequence(masks_dir);
        rows = features_of_sequence(seq);
        summary.videos = 1;
    } else {
        const std::vector<std::string> subdirs = video_subdirs(masks_dir);
        if (subdirs.empty()) {
            fail(errc::invalid_argument,
                 "'" + masks_dir + "' holds neither frame PGMs nor video directories");
        }
        for (const std::string& dir : subdirs) {
            const MaskSequence seq = read_mask_sequence(dir);
            auto part = features_of_sequence(seq);
            rows.insert(rows.end(), part.begin(), part.end());
            ++summary.videos;
        }
    }
    summary.frames = rows.size();
    write_features_csv(out_csv, rows);
    return summary;
}

TrainSummary train_run(const std::string& features_csv, const std::string& train_split,
                       int k_folds, std::uint64_t seed, const std::string& out_model) {
    const std::vector<FeatureRow> rows = read_features_csv(features_csv);

    std::vector<FeatureVector> features;
    std::vector<double> lengths;
    const std::string wanted = train_split.empty() ? "" : canonical_split(train_split);
    bool any_split = false;
    for (const FeatureRow& row : rows) {
        any_split = any_split || !row.split.empty();
        if (!wanted.empty() && canonical_split(row.split) != wanted) continue;
        if (!std::isfinite(row.length)) continue;
        features.push_back({row.area, row.width, row.height});
        lengths.push_back(row.length);
    }
    if (!wanted.empty() && !any_split) {
        fail(errc::missing_column, "'" + features_csv + "' has no split column to filter on");
    }
    if (features.empty()) {
        fail(errc::insufficient_data, "no labeled feature rows to train on");
    }

    EnsembleConfig config;
    config.k_folds = k_folds;
    config.seed = seed;

    TrainSummary summary;
    summary.samples = features.size();
    summary.r2 = kfold_r2(features, lengths, config);
    const LengthModel model = train_voting_ensemble(features, lengths, config);
    summary.lasso_lambda = model.lasso.lambda;
    save_model(model, out_model);
    return summary;
}

std::vector<PredictOutcome> predict_run(const std::string& masks_dir,
                                        const std::string& model_path,
                                        const std::string& out_path,
                                        const PipelineConfig& config, int jobs,
                                        const std::string& cycles_out) {
    const LengthModel model = load_model(model_path);

    if (has_frame_files(masks_dir)) {
        const MaskSequence seq = read_mask_sequence(masks_dir);
        PredictOutcome outcome;
        outcome.video_id = seq.video_id;
        outcome.result = run_pipeline(seq, model, config);
        outcome.ok = true;
        write_result_json(out_path, outcome.result);
        if (!cycles_out.empty()) {
            std::vector<CardiacCycle> cycles;
            for (const CycleVolumes& v : outcome.result.cycles) cycles.push_back(v.cycle);
            write_cycles_csv(cycles_out, outcome.result.video_id, cycles);
        }
        return {outcome};
    }

    const std::vector<std::string> dirs = video_subdirs(masks_dir);
    if (dirs.empty()) {
        fail(errc::invalid_argument,
             "'" + masks_dir + "' holds neither frame PGMs nor video directories");
    }
    fs::create_directories(out_path);

    std::vector<PredictOutcome> outcomes(dirs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= dirs.size()) return;
            PredictOutcome& outcome = outcomes[i];
            try {
                const MaskSequence seq = read_mask_sequence(dirs[i]);
                outcome.video_id = seq.video_id;
                outcome.result = run_pipeline(seq, model, config);
                write_result_json((fs::path(out_path) / (outcome.video_id + ".json")).string(),
                                  outcome.result);
                outcome.ok = true;
            } catch (const Error& e) {
                if (outcome.video_id.empty()) {
                    outcome.video_id = fs::path(dirs[i]).filename().string();
                }
                outcome.no_cycles = e.code() == errc::no_cycles;
                outcome.error = e.what();
            }
        }
    };
    const int thread_count =
        std::clamp(jobs, 1, static_cast<int>(dirs.size()));
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(thread_count));
    for (int t = 0; t < thread_count; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
    return outcomes;
}

EvaluateSummary evaluate_run(const std::string& predictions_path, const std::string& labels_path,
                             int n_resamples, std::uint64_t seed, const std::string& out_report) {
    const std::vector<LabeledEf> predictions = load_predictions(predictions_path);
    const std::map<std::string, double> labels = load_labels(labels_path);

    std::vector<double> pred;
    std::vector<double> pred_first;
    std::vector<double> truth;
    bool all_have_first = true;
    for (const LabeledEf& row : predictions) {
        const auto found = labels.find(row.video_id);
        if (found == labels.end()) continue;
        pred.push_back(row.predicted);
        truth.push_back(found->second);
        pred_first.push_back(row.predicted_first);
        all_have_first = all_have_first && std::isfinite(row.predicted_first);
    }
    if (pred.size() < 2) {
        fail(errc::insufficient_data, "only " + std::to_string(pred.size()) +
                                          " prediction/label pairs after joining on video_id");
    }

    const stats::PearsonResult corr = stats::pearson(pred, truth);
    const stats::Interval corr_ci = stats::bootstrap_ci(
        {pred, truth}, stats::Statistic::PEARSON_R, n_resamples, seed);
    const double r2 = stats::r2_score(truth, pred);

    json t_test = nullptr;
    bool has_t_test = false;
    if (all_have_first) {
        std::vector<double> err_all;
        std::vector<double> err_first;
        for (std::size_t i = 0; i < pred.size(); ++i) {
            err_all.push_back(std::abs(pred[i] - truth[i]));
            err_first.push_back(std::abs(pred_first[i] - truth[i]));
        }
        try {
            const stats::TTestResult t = stats::paired_t_test(err_all, err_first);
            t_test = json{{"t", t.t}, {"p", t.p}};
            has_t_test = true;
        } catch (const Error&) {
            // Identical error lists (for example, all videos single-cycle)
            // leave nothing to compare; report null instead of failing.
        }
    }

    std::vector<double> scores;
    std::vector<int> truth_class;
    std::vector<int> pred_class;
    std::vector<double> truth_class_d;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        scores.push_back(-pred[i]); // lower EF = stronger HFrEF evidence
        truth_class.push_back(truth[i] < 40.0 ? 1 : 0);
        pred_class.push_back(pred[i] < 40.0 ? 1 : 0);
        truth_class_d.push_back(truth_class.back());
    }
    const stats::RocResult roc = stats::roc_auc(scores, truth_class);
    const stats::Interval auc_ci = stats::bootstrap_ci(
        {scores, truth_class_d}, stats::Statistic::AUC, n_resamples, seed);
    const stats::Confusion confusion = stats::confusion_matrix(pred_class, truth_class);

    json report;
    report["n"] = pred.size();
    report["pearson"] =
        json{{"r", corr.r}, {"p", corr.p}, {"ci", {corr_ci.lo, corr_ci.hi}}};
    report["r2"] = r2;
    report["t_test"] = t_test;
    report["auc"] = json{{"value", roc.auc}, {"ci", {auc_ci.lo, auc_ci.hi}}};
    json points = json::array();
    for (const stats::RocPoint& p : roc.points) {
        points.push_back({{"fpr", p.fpr}, {"tpr", p.tpr}});
    }
    report["roc_points"] = points;
    report["confusion"] = json{{"tp", confusion.tp},
                               {"fp", confusion.fp},
                               {"tn", confusion.tn},
                               {"fn", confusion.fn},
                               {"accuracy", confusion.accuracy}};
    write_text_atomic(out_report, report.dump(2) + "\n");

    EvaluateSummary summary;
    summary.pairs = pred.size();
    summary.has_t_test = has_t_test;
    return summary;
}

void visualize_run(const std::string& result_path, const std::string& areas_path,
                   const std::string& out_svg) {
    const VideoResult result = read_result_json(result_path);

    const csv::Table table = csv::read_file(areas_path);
    const std::size_t c_area = table.require_column("area");
    const std::optional<std::size_t> c_frame = table.column("frame_index");
    const std::optional<std::size_t> c_vid = table.column("video_id");

    std::vector<std::pair<int, double>> frames;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& cells = table.rows[i];
        const std::size_t line = table.line_numbers[i];
        if (c_vid && normalize_video_id(cells[*c_vid]) != normalize_video_id(result.video_id)) {
            continue;
        }
        const int frame =
            c_frame ? static_cast<int>(csv::parse_long(cells[*c_frame], line, "frame_index"))
                    : static_cast<int>(frames.size());
        frames.emplace_back(frame, csv::parse_double(cells[c_area], line, "area"));
    }
    if (frames.empty()) {
        fail(errc::invalid_argument,
             "'" + areas_path + "' has no area rows for video '" + result.video_id + "'");
    }
    std::sort(frames.begin(), frames.end());

    AreaSeries series;
    series.video_id = result.video_id;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        if (frames[i].first != static_cast<int>(i)) {
            fail(errc::missing_frame, "area rows must cover frames 0.." +
                                          std::to_string(frames.size() - 1) + " without gaps");
        }
        series.areas.push_back(frames[i].second);
    }

    std::vector<CardiacCycle> cycles;
    std::vector<double> efs;
    for (const CycleVolumes& v : result.cycles) {
        if (v.cycle.es_frame >= static_cast<int>(series.areas.size())) {
            fail(errc::out_of_bounds, "cycle frames exceed the area series length");
        }
        cycles.push_back(v.cycle);
        efs.push_back(v.ef);
    }
    emit_beat_to_beat_svg(series, cycles, efs, result.ef_all_cycles,
                          result.hfref ? "HFrEF" : "not HFrEF", out_svg);
}

} // namespace lvef
