#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"

#include "core/csv.hpp"
#include "core/errors.hpp"
#include "core/geometry.hpp"
#include "core/io.hpp"
#include "core/runs.hpp"
#include "support/temp_dir.hpp"

using namespace lvef;
using testsupport::TempDir;

namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

// One traced frame: long axis first (the length label reads off its ends),
// then chords across an upright ellipse of semi-axes (b, a) centered on cx.
void append_trace(std::string& csv, const std::string& name, int frame, double cx, double cy,
                  double a, double b) {
    auto row = [&](double x1, double y1, double x2, double y2) {
        csv += name + "," + csv::format_double(x1) + "," + csv::format_double(y1) + "," +
               csv::format_double(x2) + "," + csv::format_double(y2) + "," +
               std::to_string(frame) + "\n";
    };
    row(cx, cy - a, cx, cy + a);
    for (int k = 1; k <= 19; ++k) {
        const double y = cy - a + 2.0 * a * k / 20.0;
        const double w = b * std::sqrt(std::max(0.0, 1.0 - (y - cy) * (y - cy) / (a * a)));
        row(cx - w, y, cx + w, y);
    }
}

struct IngestFixture {
    TempDir dir;
    std::string manifest;
    std::string tracings;
    std::string out;

    IngestFixture() {
        std::string m = "FileName,EF,ESV,EDV,FrameHeight,FrameWidth,FPS,NumberOfFrames,Split\n";
        std::string t = "FileName,X1,Y1,X2,Y2,Frame\n";
        int i = 0;
        for (double a : {15.0, 16.5, 18.0, 19.5, 21.0, 22.5, 24.0, 25.5, 27.0, 28.5, 30.0, 26.0}) {
            add_video("vid" + std::to_string(i), a, "TRAIN", m, t);
            ++i;
        }
        add_video("vidval", 20.0, "VAL", m, t);
        add_video("vidtest", 23.0, "TEST", m, t);

        manifest = dir.file("FileList.csv");
        tracings = dir.file("VolumeTracings.csv");
        out = dir.file("out");
        std::ofstream(manifest) << m;
        std::ofstream(tracings) << t;
    }

    static void add_video(const std::string& name, double a, const std::string& split,
                          std::string& m, std::string& t) {
        m += name + ".avi,55.0,30.0,70.0,64,64,50,100," + split + "\n";
        append_trace(t, name + ".avi", 10, 32.0, 32.0, a, 0.55 * a);
        append_trace(t, name + ".avi", 20, 32.0, 32.0, 0.72 * a, 0.55 * 0.72 * a);
    }
};

Mask ellipse_mask(int size, double semi_minor, double semi_major) {
    Mask mask(size, size);
    const double cx = size / 2.0, cy = size / 2.0;
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            const double dx = (x - cx) / semi_minor;
            const double dy = (y - cy) / semi_major;
            if (dx * dx + dy * dy <= 1.0) mask.set(x, y, 1);
        }
    }
    return mask;
}

void write_pulsating_video(const std::string& dir, int n_frames, int period, double a0) {
    MaskSequence seq;
    seq.width = seq.height = 80;
    for (int t = 0; t < n_frames; ++t) {
        const double s = 0.8 + 0.2 * std::cos(2.0 * kPi * t / period);
        seq.frames.push_back(ellipse_mask(80, 0.55 * a0 * s, a0 * s));
    }
    write_mask_sequence(seq, dir);
}

void write_flat_video(const std::string& dir, int n_frames) {
    MaskSequence seq;
    seq.width = seq.height = 80;
    for (int t = 0; t < n_frames; ++t) {
        seq.frames.push_back(ellipse_mask(80, 10.0, 20.0));
    }
    write_mask_sequence(seq, dir);
}

// Model fit on static ellipses, enough for the predict/visualize paths.
std::string quick_model(TempDir& dir) {
    std::vector<FeatureVector> features;
    std::vector<double> lengths;
    for (double a = 10.0; a <= 30.0; a += 2.0) {
        for (double ratio : {0.45, 0.55, 0.65}) {
            const LvFrameFeatures f = extract_features(ellipse_mask(80, a * ratio, a), 0);
            features.push_back({f.area, f.width, f.height});
            lengths.push_back(2.0 * a);
        }
    }
    EnsembleConfig config;
    config.et_trees = 12;
    config.ada_rounds = 8;
    config.gbdt_rounds = 25;
    const std::string path = dir.file("model.json");
    save_model(train_voting_ensemble(features, lengths, config), path);
    return path;
}

} // namespace

TEST_CASE("ingest writes masks and a feature table with lengths and splits") {
    IngestFixture fx;
    const IngestSummary summary = ingest_run(fx.manifest, fx.tracings, fx.out);
    CHECK(summary.videos == 14);
    CHECK(summary.frames == 28);
    CHECK(summary.clamped_points == 0);
    CHECK(summary.warnings.empty());

    CHECK(fs::exists(fs::path(fx.out) / "masks" / "vid0" / "frame_00010.pgm"));
    CHECK(fs::exists(fs::path(fx.out) / "masks" / "vid0" / "frame_00020.pgm"));
    CHECK(fs::exists(fs::path(fx.out) / "masks" / "vidtest" / "frame_00010.pgm"));

    const auto rows = read_features_csv((fs::path(fx.out) / "features.csv").string());
    REQUIRE(rows.size() == 28);
    std::size_t train_rows = 0;
    for (const FeatureRow& row : rows) {
        CHECK(row.area > 0.0);
        CHECK(std::isfinite(row.length));
        CHECK(!row.split.empty());
        if (row.split == "TRAIN") ++train_rows;
        if (row.video_id == "vid0" && row.frame_index == 10) {
            CHECK(row.length == doctest::Approx(30.0)); // the long axis spans 2a
        }
    }
    CHECK(train_rows == 24);

    // masks round-trip as a readable sequence... of two frames with a gap,
    // so read them individually
    const Mask ed = read_pgm((fs::path(fx.out) / "masks" / "vid0" / "frame_00010.pgm").string());
    CHECK(ed.width == 64);
    CHECK(ed.height == 64);
}

TEST_CASE("ingest clamps out-of-frame coordinates and counts them") {
    IngestFixture fx;
    std::string t = read_text_file(fx.tracings);
    append_trace(t, "vid0.avi", 30, 32.0, 32.0, 20.0, 11.0);
    t += "vid0.avi,25,33,70.5,33,30\n"; // a chord endpoint past the right edge
    std::ofstream(fx.tracings) << t;

    const IngestSummary summary = ingest_run(fx.manifest, fx.tracings, fx.out);
    CHECK(summary.clamped_points == 1);
    CHECK(summary.frames == 29);
    CHECK(summary.warnings.empty());
    CHECK(fs::exists(fs::path(fx.out) / "masks" / "vid0" / "frame_00030.pgm"));
}

TEST_CASE("ingest warns on unmatched and degenerate traces instead of failing") {
    IngestFixture fx;
    std::string t = read_text_file(fx.tracings);
    // a video the manifest does not know
    append_trace(t, "ghost.avi", 5, 32.0, 32.0, 20.0, 11.0);
    // a frame whose single chord sits entirely on one side of the axis,
    // which spans no polygon
    t += "vid1.avi,32,12,32,52,40\nvid1.avi,34,30,40,30,40\n";
    std::ofstream(fx.tracings) << t;

    const IngestSummary summary = ingest_run(fx.manifest, fx.tracings, fx.out);
    CHECK(summary.videos == 14); // ghost skipped, vid1 still counted
    CHECK(summary.frames == 28); // the degenerate frame is dropped
    REQUIRE(summary.warnings.size() == 2);
    bool ghost = false, degenerate = false;
    for (const std::string& w : summary.warnings) {
        ghost = ghost || w.find("ghost") != std::string::npos;
        degenerate = degenerate || w.find("frame 40") != std::string::npos;
    }
    CHECK(ghost);
    CHECK(degenerate);
    CHECK(!fs::exists(fs::path(fx.out) / "masks" / "vid1" / "frame_00040.pgm"));
}

TEST_CASE("extract walks one video or a directory of videos") {
    TempDir dir;
    write_pulsating_video(dir.file("masks/alpha"), 30, 15, 24.0);
    write_pulsating_video(dir.file("masks/beta"), 20, 10, 20.0);

    const std::string multi_csv = dir.file("multi.csv");
    const ExtractSummary multi = extract_run(dir.file("masks"), multi_csv);
    CHECK(multi.videos == 2);
    CHECK(multi.frames == 50);
    const auto rows = read_features_csv(multi_csv);
    REQUIRE(rows.size() == 50);
    CHECK(rows.front().video_id == "alpha");
    CHECK(rows.back().video_id == "beta");
    for (const FeatureRow& row : rows) {
        CHECK(row.area > 0.0);
        CHECK(!std::isfinite(row.length)); // no tracings here, so no labels
    }

    const std::string single_csv = dir.file("single.csv");
    const ExtractSummary single = extract_run(dir.file("masks/alpha"), single_csv);
    CHECK(single.videos == 1);
    CHECK(single.frames == 30);

    TempDir empty;
    CHECK_THROWS_AS(extract_run(empty.file("nothing"), empty.file("x.csv")), Error);
}

TEST_CASE("train filters on split, reports k-fold r2 and writes a loadable model") {
    IngestFixture fx;
    ingest_run(fx.manifest, fx.tracings, fx.out);
    const std::string features = (fs::path(fx.out) / "features.csv").string();
    const std::string model_path = fx.dir.file("model.json");

    const TrainSummary summary = train_run(features, "train", 3, 42, model_path);
    CHECK(summary.samples == 24);
    REQUIRE(summary.r2.per_fold.size() == 3);
    CHECK(summary.r2.mean > 0.8); // lengths are near-deterministic in the features
    bool on_grid = false;
    for (double g : EnsembleConfig{}.lasso_lambda_grid) {
        on_grid = on_grid || g == summary.lasso_lambda;
    }
    CHECK(on_grid);

    const LengthModel model = load_model(model_path);
    CHECK(model.trained);
    const LvFrameFeatures probe = extract_features(ellipse_mask(64, 11.0, 20.0), 0);
    const double predicted = predict_length(model, {probe.area, probe.width, probe.height});
    CHECK(predicted == doctest::Approx(40.0).epsilon(0.15));

    SUBCASE("the TRAINING alias matches TRAIN rows") {
        const TrainSummary alias = train_run(features, "TRAINING", 3, 42, model_path);
        CHECK(alias.samples == 24);
    }
    SUBCASE("an empty split trains on every labeled row") {
        const TrainSummary all = train_run(features, "", 3, 42, model_path);
        CHECK(all.samples == 28);
    }
    SUBCASE("a filter without split data is an error") {
        std::vector<FeatureRow> rows = read_features_csv(features);
        for (FeatureRow& row : rows) row.split.clear();
        const std::string stripped = fx.dir.file("stripped.csv");
        write_features_csv(stripped, rows);
        try {
            train_run(stripped, "train", 3, 42, model_path);
            FAIL("expected a missing-column failure");
        } catch (const Error& e) {
            CHECK(e.code() == errc::missing_column);
        }
    }
    SUBCASE("a filter matching nothing is an error") {
        std::vector<FeatureRow> rows = read_features_csv(features);
        for (FeatureRow& row : rows) {
            if (row.split == "VAL") row.split = "TRAIN";
        }
        const std::string no_val = fx.dir.file("noval.csv");
        write_features_csv(no_val, rows);
        try {
            train_run(no_val, "val", 3, 42, model_path);
            FAIL("expected an insufficient-data failure");
        } catch (const Error& e) {
            CHECK(e.code() == errc::insufficient_data);
        }
    }
}

TEST_CASE("predict handles a single video directory") {
    TempDir dir;
    const std::string model = quick_model(dir);
    write_pulsating_video(dir.file("video"), 100, 25, 26.0);
    const std::string out = dir.file("result.json");
    const std::string cycles_csv = dir.file("cycles.csv");

    PipelineConfig config;
    const auto outcomes = predict_run(dir.file("video"), model, out, config, 1, cycles_csv);
    REQUIRE(outcomes.size() == 1);
    CHECK(outcomes[0].ok);
    CHECK(outcomes[0].video_id == "video");

    const VideoResult result = read_result_json(out);
    CHECK(result.video_id == "video");
    REQUIRE(!result.cycles.empty());
    // scale swings 1.0 -> 0.6, so EF should land near 100 * (1 - 0.216)
    CHECK(result.ef_all_cycles == doctest::Approx(78.4).epsilon(0.05));

    const csv::Table cycles = csv::read_file(cycles_csv);
    CHECK(cycles.rows.size() == result.cycles.size());

    SUBCASE("failures propagate in single mode") {
        write_flat_video(dir.file("flat"), 60);
        try {
            predict_run(dir.file("flat"), model, dir.file("flat.json"), config, 1);
            FAIL("expected a no-cycles failure");
        } catch (const Error& e) {
            CHECK(e.code() == errc::no_cycles);
        }
        CHECK(!fs::exists(dir.file("flat.json")));
    }
}

TEST_CASE("predict fans a directory of videos out over worker threads") {
    TempDir dir;
    const std::string model = quick_model(dir);
    write_pulsating_video(dir.file("batch/v_one"), 100, 25, 26.0);
    write_pulsating_video(dir.file("batch/v_two"), 80, 20, 22.0);
    write_flat_video(dir.file("batch/v_flat"), 60);
    const std::string out = dir.file("results");

    PipelineConfig config;
    const auto outcomes = predict_run(dir.file("batch"), model, out, config, 3);
    REQUIRE(outcomes.size() == 3);
    // outcomes follow the sorted directory order: v_flat, v_one, v_two
    CHECK(outcomes[0].video_id == "v_flat");
    CHECK_FALSE(outcomes[0].ok);
    CHECK(outcomes[0].no_cycles);
    CHECK(!outcomes[0].error.empty());
    CHECK(outcomes[1].video_id == "v_one");
    CHECK(outcomes[1].ok);
    CHECK(outcomes[2].video_id == "v_two");
    CHECK(outcomes[2].ok);

    CHECK(fs::exists(fs::path(out) / "v_one.json"));
    CHECK(fs::exists(fs::path(out) / "v_two.json"));
    CHECK(!fs::exists(fs::path(out) / "v_flat.json"));

    // thread count must not change results: rerun sequentially and compare
    const std::string out_seq = dir.file("results_seq");
    const auto sequential = predict_run(dir.file("batch"), model, out_seq, config, 1);
    REQUIRE(sequential.size() == 3);
    CHECK(read_text_file((fs::path(out) / "v_one.json").string()) ==
          read_text_file((fs::path(out_seq) / "v_one.json").string()));
    CHECK(read_text_file((fs::path(out) / "v_two.json").string()) ==
          read_text_file((fs::path(out_seq) / "v_two.json").string()));
}

TEST_CASE("evaluate joins predictions with labels and writes the report") {
    TempDir dir;
    const std::string pred_csv = dir.file("pred.csv");
    const std::string labels_csv = dir.file("labels.csv");
    {
        std::ofstream out(pred_csv);
        out << "video_id,predicted_ef,predicted_ef_first\n";
        out << "a,58.2,57.0\nb,35.5,33.9\nc,62.1,64.0\nd,30.2,27.9\n";
        out << "e,47.8,49.1\nf,52.3,50.2\ng,38.9,41.0\nh,66.0,64.2\n";
        out << "orphan,50.0,50.0\n"; // no label, dropped by the join
    }
    {
        std::ofstream out(labels_csv);
        out << "video_id,label_ef\n";
        out << "a,57.0\nb,34.0\nc,63.5\nd,31.0\ne,49.0\nf,51.0\ng,40.5\nh,64.0\n";
        out << "unpredicted,45.0\n";
    }

    const std::string report_path = dir.file("report.json");
    const EvaluateSummary summary = evaluate_run(pred_csv, labels_csv, 50, 42, report_path);
    CHECK(summary.pairs == 8);
    CHECK(summary.has_t_test);

    const std::string text = read_text_file(report_path);
    const auto report = nlohmann::json::parse(text);
    CHECK(report.at("n").get<int>() == 8);
    CHECK(report.at("pearson").at("r").get<double>() > 0.95);
    CHECK(report.at("pearson").at("ci").size() == 2);
    CHECK(report.at("r2").get<double>() > 0.8);
    CHECK(!report.at("t_test").is_null());
    CHECK(report.at("auc").at("value").get<double>() == 1.0); // ranking is clean
    // truth below 40: b and d; predictions below 40: b, d and g (g is wrong)
    CHECK(report.at("confusion").at("tp").get<int>() == 2);
    CHECK(report.at("confusion").at("fp").get<int>() == 1);
    CHECK(report.at("confusion").at("tn").get<int>() == 5);
    CHECK(report.at("confusion").at("fn").get<int>() == 0);
    CHECK(report.at("roc_points").is_array());

    SUBCASE("a directory of result files feeds the same path") {
        const std::string results = dir.file("results");
        fs::create_directories(results);
        const std::vector<std::pair<std::string, double>> efs{
            {"a", 58.2}, {"b", 35.5}, {"c", 62.1}, {"d", 30.2}};
        for (const auto& [id, ef] : efs) {
            VideoResult r;
            r.video_id = id;
            r.ef = r.ef_all_cycles = r.ef_first_cycle = ef;
            r.ef_second_cycle = std::numeric_limits<double>::quiet_NaN();
            r.hfref = ef < 40.0;
            write_result_json((fs::path(results) / (id + ".json")).string(), r);
        }
        const EvaluateSummary from_dir =
            evaluate_run(results, labels_csv, 50, 42, dir.file("report2.json"));
        CHECK(from_dir.pairs == 4);
    }

    SUBCASE("fewer than two joined pairs is an error") {
        const std::string tiny = dir.file("tiny.csv");
        std::ofstream(tiny) << "video_id,predicted_ef\nzz,50.0\n";
        try {
            evaluate_run(tiny, labels_csv, 50, 42, dir.file("r.json"));
            FAIL("expected an insufficient-data failure");
        } catch (const Error& e) {
            CHECK(e.code() == errc::insufficient_data);
        }
    }

    SUBCASE("missing first-cycle column drops the t test") {
        const std::string no_first = dir.file("nofirst.csv");
        std::ofstream(no_first) << "video_id,predicted_ef\na,58.2\nb,35.5\nc,62.1\nd,30.2\n";
        const EvaluateSummary s =
            evaluate_run(no_first, labels_csv, 50, 42, dir.file("r3.json"));
        CHECK_FALSE(s.has_t_test);
        const auto r = nlohmann::json::parse(read_text_file(dir.file("r3.json")));
        CHECK(r.at("t_test").is_null());
    }
}

TEST_CASE("visualize rebuilds the beat plot from a result and an area table") {
    TempDir dir;
    const std::string model = quick_model(dir);
    write_pulsating_video(dir.file("video"), 100, 25, 26.0);
    const std::string result_path = dir.file("result.json");
    predict_run(dir.file("video"), model, result_path, {}, 1);
    const std::string areas_path = dir.file("areas.csv");
    extract_run(dir.file("video"), areas_path);

    const std::string svg_path = dir.file("beat.svg");
    visualize_run(result_path, areas_path, svg_path);
    const std::string svg = read_text_file(svg_path);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("video") != std::string::npos);
    CHECK(svg.find("HFrEF") != std::string::npos);

    // deterministic bytes on a rerun
    const std::string svg2_path = dir.file("beat2.svg");
    visualize_run(result_path, areas_path, svg2_path);
    CHECK(read_text_file(svg2_path) == svg);

    SUBCASE("the area table may be bare areas without frame indices") {
        const auto rows = read_features_csv(areas_path);
        const std::string bare = dir.file("bare.csv");
        std::ofstream out(bare);
        out << "area\n";
        for (const FeatureRow& row : rows) out << csv::format_double(row.area) << "\n";
        out.close();
        visualize_run(result_path, bare, dir.file("beat3.svg"));
        CHECK(read_text_file(dir.file("beat3.svg")) == svg);
    }

    SUBCASE("missing columns and gaps are rejected") {
        const std::string no_area = dir.file("noarea.csv");
        std::ofstream(no_area) << "video_id,frame_index\nvideo,0\n";
        try {
            visualize_run(result_path, no_area, dir.file("x.svg"));
            FAIL("expected a missing-column failure");
        } catch (const Error& e) {
            CHECK(e.code() == errc::missing_column);
        }

        const std::string gappy = dir.file("gappy.csv");
        std::ofstream(gappy) << "frame_index,area\n0,100\n2,120\n";
        try {
            visualize_run(result_path, gappy, dir.file("y.svg"));
            FAIL("expected a missing-frame failure");
        } catch (const Error& e) {
            CHECK(e.code() == errc::missing_frame);
        }
    }

    SUBCASE("an area table for a different video is rejected") {
        const auto rows = read_features_csv(areas_path);
        const std::string other = dir.file("other.csv");
        std::ofstream out(other);
        out << "video_id,frame_index,area\n";
        for (const FeatureRow& row : rows) {
            out << "somebody_else," << row.frame_index << ","
                << csv::format_double(row.area) << "\n";
        }
        out.close();
        CHECK_THROWS_AS(visualize_run(result_path, other, dir.file("z.svg")), Error);
    }
}
