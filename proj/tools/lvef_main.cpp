#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "lvef.h"

namespace {

int exit_for(lvef_status status) {
    if (status == LVEF_OK) return 0;
    if (status == LVEF_ERR_NO_CYCLES) return 3;
    return 2;
}

int report_failure(lvef_status status) {
    std::fprintf(stderr, "lvef: %s (%s)\n", lvef_last_error(), lvef_status_name(status));
    return exit_for(status);
}

void print_warning(const char* message, void*) {
    std::fprintf(stderr, "lvef: warning: %s\n", message);
}

struct PredictTally {
    size_t videos = 0;
    bool any_hard_failure = false;
};

void print_video_outcome(const char* video_id, int ok, int no_cycles, const char* error,
                         void* ctx) {
    auto* tally = static_cast<PredictTally*>(ctx);
    ++tally->videos;
    if (ok) {
        std::printf("%s: ok\n", video_id);
    } else {
        tally->any_hard_failure = tally->any_hard_failure || !no_cycles;
        std::fprintf(stderr, "%s: %s\n", video_id, error);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Left-ventricular ejection fraction from echocardiogram segmentations"};
    app.require_subcommand(1);
    app.set_version_flag("--version", []() { return std::string(lvef_version()); });

    // ingest
    std::string manifest, tracings, ingest_out;
    CLI::App* ingest = app.add_subcommand(
        "ingest", "Rasterize expert tracings into masks plus a features CSV");
    ingest->add_option("--manifest", manifest, "Video manifest CSV")->required();
    ingest->add_option("--tracings", tracings, "Volume tracings CSV")->required();
    ingest->add_option("--out", ingest_out, "Output directory")->required();

    // extract
    std::string extract_masks, extract_out;
    CLI::App* extract =
        app.add_subcommand("extract", "Geometric features from mask directories");
    extract->add_option("--masks", extract_masks, "Video mask directory, or a directory of them")
        ->required();
    extract->add_option("--out", extract_out, "Output features CSV")->required();

    // train-length
    std::string train_features, train_split, train_out;
    int k_folds = 5;
    std::uint64_t train_seed = 42;
    CLI::App* train =
        app.add_subcommand("train-length", "Train the LV length voting ensemble");
    train->add_option("--features", train_features, "Features CSV with length labels")
        ->required();
    train
        ->add_option("--train-split", train_split,
                     "Only use rows with this split (train/val/test); default: all labeled rows")
        ->check(CLI::IsMember({"train", "val", "test", "training", "validation", "testing"},
                              CLI::ignore_case));
    train->add_option("--k", k_folds, "Cross-validation folds")
        ->capture_default_str()
        ->check(CLI::Range(2, 1000000));
    train->add_option("--seed", train_seed, "Random seed")->capture_default_str();
    train->add_option("--out", train_out, "Output model JSON")->required();

    // predict
    std::string predict_masks, predict_model, predict_out, cycles_out;
    lvef_pipeline_params params;
    lvef_pipeline_params_init(&params);
    bool single_cycle = false;
    int jobs = 1;
    CLI::App* predict = app.add_subcommand("predict", "Per-video EF and HFrEF classification");
    predict->add_option("--masks", predict_masks, "Video mask directory, or a directory of them")
        ->required();
    predict->add_option("--model", predict_model, "Trained length model JSON")->required();
    predict
        ->add_option("--out", predict_out,
                     "Result JSON path (single video) or output directory (batch)")
        ->required();
    predict->add_option("--min-distance", params.min_distance, "Minimum frames between peaks")
        ->capture_default_str()
        ->check(CLI::Range(1, 1000000));
    predict
        ->add_option("--prominence-fraction", params.prominence_fraction,
                     "Peak prominence as a fraction of the series range")
        ->capture_default_str()
        ->check(CLI::Range(1e-9, 0.999999999));
    predict
        ->add_option("--jeffrey-fraction", params.refine_fraction,
                     "Share of top/bottom areas pooled into refined ED/ES areas")
        ->capture_default_str()
        ->check(CLI::Range(1e-9, 1.0));
    predict
        ->add_option("--volume-constant", params.volume_constant,
                     "Constant c in the area-length volume V = c*A^2/L")
        ->capture_default_str()
        ->check(CLI::Range(1e-12, 1e12));
    predict->add_flag("--single-cycle", single_cycle,
                      "Report the first cycle's EF instead of the all-cycle average");
    predict->add_option("--jobs", jobs, "Worker threads in batch mode")
        ->capture_default_str()
        ->check(CLI::Range(1, 4096));
    predict->add_option("--cycles-out", cycles_out,
                        "Also write detected cycles as CSV (single video only)");

    // evaluate
    std::string eval_predictions, eval_labels, eval_out;
    int bootstrap = 100;
    std::uint64_t eval_seed = 42;
    CLI::App* evaluate =
        app.add_subcommand("evaluate", "Statistical report of predictions against labels");
    evaluate
        ->add_option("--predictions", eval_predictions,
                     "Directory of result JSON files, or CSV with video_id + predicted_ef")
        ->required();
    evaluate->add_option("--labels", eval_labels, "Label CSV with video_id + label_ef")
        ->required();
    evaluate->add_option("--bootstrap", bootstrap, "Bootstrap resamples for the CIs")
        ->capture_default_str()
        ->check(CLI::Range(1, 10000000));
    evaluate->add_option("--seed", eval_seed, "Random seed")->capture_default_str();
    evaluate->add_option("--out", eval_out, "Output report JSON")->required();

    // visualize
    std::string vis_result, vis_areas, vis_out;
    CLI::App* visualize =
        app.add_subcommand("visualize", "Beat-to-beat SVG for one video's result");
    visualize->add_option("--result", vis_result, "Result JSON from predict")->required();
    visualize->add_option("--areas", vis_areas, "Features CSV holding the video's areas")
        ->required();
    visualize->add_option("--out", vis_out, "Output SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (app.got_subcommand(ingest)) {
        size_t videos = 0, frames = 0, clamped = 0;
        const lvef_status status =
            lvef_run_ingest(manifest.c_str(), tracings.c_str(), ingest_out.c_str(),
                            print_warning, nullptr, &videos, &frames, &clamped);
        if (status != LVEF_OK) return report_failure(status);
        std::printf("ingested %zu videos (%zu frames, %zu clamped points) into %s\n", videos,
                    frames, clamped, ingest_out.c_str());
        return 0;
    }

    if (app.got_subcommand(extract)) {
        size_t videos = 0, frames = 0;
        const lvef_status status =
            lvef_run_extract(extract_masks.c_str(), extract_out.c_str(), &videos, &frames);
        if (status != LVEF_OK) return report_failure(status);
        std::printf("extracted %zu frames from %zu videos into %s\n", frames, videos,
                    extract_out.c_str());
        return 0;
    }

    if (app.got_subcommand(train)) {
        size_t samples = 0;
        double r2 = 0.0, lambda = 0.0;
        std::vector<double> fold_r2(static_cast<size_t>(k_folds), 0.0);
        const lvef_status status =
            lvef_run_train(train_features.c_str(), train_split.c_str(), k_folds, train_seed,
                           train_out.c_str(), &samples, &r2, fold_r2.data(), &lambda);
        if (status != LVEF_OK) return report_failure(status);
        for (size_t i = 0; i < fold_r2.size(); ++i) {
            std::printf("fold %zu R^2: %.6f\n", i + 1, fold_r2[i]);
        }
        std::printf("mean R^2: %.6f\n", r2);
        std::printf("trained on %zu samples (lasso lambda %g), model written to %s\n", samples,
                    lambda, train_out.c_str());
        return 0;
    }

    if (app.got_subcommand(predict)) {
        params.single_cycle = single_cycle ? 1 : 0;
        PredictTally tally;
        size_t ok = 0, failed = 0;
        const lvef_status status = lvef_run_predict(
            predict_masks.c_str(), predict_model.c_str(), predict_out.c_str(), &params, jobs,
            cycles_out.empty() ? nullptr : cycles_out.c_str(), print_video_outcome, &tally, &ok,
            &failed);
        if (status != LVEF_OK) return report_failure(status);
        std::printf("%zu ok, %zu failed, results in %s\n", ok, failed, predict_out.c_str());
        if (failed > 0) return tally.any_hard_failure ? 2 : 3;
        return 0;
    }

    if (app.got_subcommand(evaluate)) {
        size_t pairs = 0;
        int has_t_test = 0;
        const lvef_status status =
            lvef_run_evaluate(eval_predictions.c_str(), eval_labels.c_str(), bootstrap,
                              eval_seed, eval_out.c_str(), &pairs, &has_t_test);
        if (status != LVEF_OK) return report_failure(status);
        std::printf("evaluated %zu pairs%s, report written to %s\n", pairs,
                    has_t_test ? " (with paired t-test)" : "", eval_out.c_str());
        return 0;
    }

    if (app.got_subcommand(visualize)) {
        const lvef_status status =
            lvef_run_visualize(vis_result.c_str(), vis_areas.c_str(), vis_out.c_str());
        if (status != LVEF_OK) return report_failure(status);
        std::printf("visualization written to %s\n", vis_out.c_str());
        return 0;
    }

    std::fprintf(stderr, "lvef: no subcommand selected\n");
    return 1;
}
