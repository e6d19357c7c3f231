#include "doctest.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <vector>

#include "core/errors.hpp"
#include "core/geometry.hpp"
#include "core/pipeline.hpp"
#include "support/temp_dir.hpp"

using namespace lvef;
using testsupport::TempDir;

namespace {

constexpr double kPi = 3.14159265358979323846;

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

// Length model trained on a sweep of static ellipses, labeled with the full
// major-axis length. Cheap enough to build per test case.
LengthModel ellipse_model() {
    std::vector<FeatureVector> features;
    std::vector<double> lengths;
    for (double a = 10.0; a <= 30.0; a += 2.0) {
        for (double ratio : {0.45, 0.55, 0.65}) {
            const Mask mask = ellipse_mask(80, a * ratio, a);
            const LvFrameFeatures f = extract_features(mask, 0);
            features.push_back({f.area, f.width, f.height});
            lengths.push_back(2.0 * a);
        }
    }
    EnsembleConfig config;
    config.et_trees = 12;
    config.ada_rounds = 8;
    config.gbdt_rounds = 25;
    return train_voting_ensemble(features, lengths, config);
}

MaskSequence pulsating_sequence(int n_frames, int period) {
    MaskSequence seq;
    seq.video_id = "synthetic";
    seq.width = 80;
    seq.height = 80;
    for (int t = 0; t < n_frames; ++t) {
        const double s = 0.8 + 0.2 * std::cos(2.0 * kPi * t / period);
        seq.frames.push_back(ellipse_mask(80, 0.55 * 28.0 * s, 28.0 * s));
    }
    return seq;
}

} // namespace

TEST_CASE("area-length volume worked example") {
    const VolumeConstant c; // 8 / (3 pi)
    // V = 8/(3 pi) * 30^2 / 8 = 300 / pi
    CHECK(volume_area_length(30.0, 8.0, c) == doctest::Approx(300.0 / kPi).epsilon(1e-12));
    CHECK(volume_area_length(0.0, 5.0, c) == 0.0);
    CHECK_THROWS_AS(volume_area_length(30.0, 0.0, c), Error);
    CHECK_THROWS_AS(volume_area_length(-1.0, 5.0, c), Error);
    CHECK_THROWS_AS(volume_area_length(30.0, 5.0, {-2.0}), Error);
    try {
        volume_area_length(30.0, 0.0, c);
    } catch (const Error& e) {
        CHECK(e.code() == errc::zero_length);
    }
}

TEST_CASE("ejection fraction from volumes") {
    CHECK(ef_from_volumes(100.0, 40.0) == doctest::Approx(60.0));
    CHECK(ef_from_volumes(85.0, 85.0) == 0.0);
    CHECK_THROWS_AS(ef_from_volumes(0.0, 10.0), Error);
    try {
        ef_from_volumes(-5.0, 10.0);
    } catch (const Error& e) {
        CHECK(e.code() == errc::non_positive_edv);
    }
}

TEST_CASE("cycle EF matches the explicit two-volume route") {
    // areas 40 -> 20, lengths 10 -> 8: EF = 100 * (1 - (400/8)/(1600/10)) = 68.75
    CHECK(cycle_ef(40.0, 10.0, 20.0, 8.0) == doctest::Approx(68.75).epsilon(1e-12));

    const VolumeConstant c;
    const double edv = volume_area_length(40.0, 10.0, c);
    const double esv = volume_area_length(20.0, 8.0, c);
    CHECK(cycle_ef(40.0, 10.0, 20.0, 8.0) ==
          doctest::Approx(ef_from_volumes(edv, esv)).epsilon(1e-12));

    CHECK_THROWS_AS(cycle_ef(40.0, 0.0, 20.0, 8.0), Error);
    CHECK_THROWS_AS(cycle_ef(0.0, 10.0, 20.0, 8.0), Error);
}

TEST_CASE("cycle EF never touches the volume constant") {
    // identical bits for wildly different constants, by construction
    const double a = cycle_ef(37.5, 11.25, 18.75, 9.0);
    for (double k : {1.0, 8.0 / (3.0 * kPi), 8.0 * kPi / 3.0, 1e6}) {
        const VolumeConstant c{k};
        const double via_volumes = ef_from_volumes(volume_area_length(37.5, 11.25, c),
                                                   volume_area_length(18.75, 9.0, c));
        CHECK(a == doctest::Approx(via_volumes).epsilon(1e-12));
    }
}

TEST_CASE("all-cycle EF is the plain mean") {
    CHECK(ef_all_cycles({53.68, 51.28, 45.30}) == doctest::Approx(50.09).epsilon(2e-4));
    CHECK(ef_all_cycles({62.5}) == 62.5);
    CHECK_THROWS_AS(ef_all_cycles({}), Error);
    try {
        ef_all_cycles({});
    } catch (const Error& e) {
        CHECK(e.code() == errc::no_cycles);
    }
}

TEST_CASE("reduced EF classification is strict at 40") {
    CHECK(classify_hfref(39.99));
    CHECK_FALSE(classify_hfref(40.0));
    CHECK_FALSE(classify_hfref(40.01));
    CHECK(classify_hfref(0.0));
    CHECK_FALSE(classify_hfref(75.0));
    CHECK_THROWS_AS(classify_hfref(std::numeric_limits<double>::quiet_NaN()), Error);
}

TEST_CASE("pipeline on a pulsating ellipse sequence") {
    const LengthModel model = ellipse_model();
    const MaskSequence seq = pulsating_sequence(120, 40);
    PipelineConfig config;
    const VideoResult result = run_pipeline(seq, model, config);

    CHECK(result.video_id == "synthetic");
    CHECK(result.method == "all_cycles");
    REQUIRE(result.cycles.size() >= 2);
    CHECK(result.ef == result.ef_all_cycles);
    CHECK(std::isfinite(result.ef_second_cycle));

    // scale drops from 1.0 to 0.6, so the true EF is 100 * (1 - 0.6^3) = 78.4
    CHECK(result.ef_all_cycles == doctest::Approx(78.4).epsilon(0.05));
    CHECK(result.hfref == (result.ef_all_cycles < 40.0));

    double mean = 0.0;
    for (const CycleVolumes& v : result.cycles) {
        CHECK(v.cycle.es_frame > v.cycle.ed_frame);
        CHECK(v.ed_area > v.es_area);
        CHECK(v.edv > v.esv);
        CHECK(v.ef >= 0.0);
        CHECK(v.ef < 100.0);
        mean += v.ef;
    }
    mean /= static_cast<double>(result.cycles.size());
    CHECK(result.ef_all_cycles == doctest::Approx(mean).epsilon(1e-12));
    CHECK(result.ef_first_cycle == result.cycles.front().ef);
    CHECK(result.ef_second_cycle == result.cycles[1].ef);

    SUBCASE("single-cycle mode reports the first cycle as the headline") {
        config.single_cycle = true;
        const VideoResult single = run_pipeline(seq, model, config);
        CHECK(single.method == "first_cycle");
        CHECK(single.ef == single.ef_first_cycle);
        CHECK(single.ef_first_cycle == result.ef_first_cycle);
        CHECK(single.hfref == result.hfref); // classification ignores the mode
    }
}

TEST_CASE("pipeline rejects flat or empty input") {
    const LengthModel model = ellipse_model();
    PipelineConfig config;

    MaskSequence flat;
    flat.video_id = "flat";
    flat.width = flat.height = 80;
    for (int t = 0; t < 60; ++t) flat.frames.push_back(ellipse_mask(80, 12.0, 24.0));
    try {
        run_pipeline(flat, model, config);
        FAIL("expected a no-cycles failure");
    } catch (const Error& e) {
        CHECK(e.code() == errc::no_cycles);
    }

    MaskSequence empty;
    empty.video_id = "empty";
    CHECK_THROWS_AS(run_pipeline(empty, model, config), Error);

    LengthModel blank;
    const MaskSequence seq = pulsating_sequence(60, 30);
    try {
        run_pipeline(seq, blank, config);
        FAIL("expected an untrained-model failure");
    } catch (const Error& e) {
        CHECK(e.code() == errc::untrained_model);
    }
}

TEST_CASE("result JSON round-trips, dropping the second cycle when absent") {
    TempDir dir;
    VideoResult result;
    result.video_id = "vid42";
    result.method = "all_cycles";
    CycleVolumes v;
    v.cycle = {12, 31};
    v.ed_area = 400.5;
    v.es_area = 210.25;
    v.ed_length = 38.0;
    v.es_length = 31.5;
    v.edv = 3580.1;
    v.esv = 1191.7;
    v.ef = 55.25;
    result.cycles.push_back(v);
    result.ef = result.ef_all_cycles = result.ef_first_cycle = 55.25;
    result.ef_second_cycle = std::numeric_limits<double>::quiet_NaN();
    result.hfref = false;
    result.flags.push_back("cycle ed=70 es=90: EF -3.1 outside [0, 100), cycle rejected");

    const std::string path = dir.file("result.json");
    write_result_json(path, result);
    const VideoResult back = read_result_json(path);

    CHECK(back.video_id == "vid42");
    CHECK(back.method == "all_cycles");
    REQUIRE(back.cycles.size() == 1);
    CHECK(back.cycles[0].cycle.ed_frame == 12);
    CHECK(back.cycles[0].cycle.es_frame == 31);
    CHECK(back.cycles[0].ed_area == 400.5);
    CHECK(back.cycles[0].es_area == 210.25);
    CHECK(back.cycles[0].ed_length == 38.0);
    CHECK(back.cycles[0].es_length == 31.5);
    CHECK(back.cycles[0].edv == 3580.1);
    CHECK(back.cycles[0].esv == 1191.7);
    CHECK(back.cycles[0].ef == 55.25);
    CHECK(back.ef == 55.25);
    CHECK(back.ef_all_cycles == 55.25);
    CHECK(back.ef_first_cycle == 55.25);
    CHECK(std::isnan(back.ef_second_cycle));
    CHECK_FALSE(back.hfref);
    REQUIRE(back.flags.size() == 1);
    CHECK(back.flags[0] == result.flags[0]);

    SUBCASE("a present second cycle survives the round trip") {
        result.ef_second_cycle = 48.5;
        write_result_json(path, result);
        CHECK(read_result_json(path).ef_second_cycle == 48.5);
    }
}

TEST_CASE("result JSON reader rejects malformed files") {
    TempDir dir;
    CHECK_THROWS_AS(read_result_json(dir.file("missing.json")), Error);

    const std::string bad = dir.file("bad.json");
    {
        std::ofstream out(bad);
        out << "{\"video_id\": \"x\"}";
    }
    CHECK_THROWS_AS(read_result_json(bad), Error);

    const std::string junk = dir.file("junk.json");
    {
        std::ofstream out(junk);
        out << "not json either";
    }
    CHECK_THROWS_AS(read_result_json(junk), Error);
}
