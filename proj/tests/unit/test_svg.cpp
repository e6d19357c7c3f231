#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "core/errors.hpp"
#include "core/io.hpp"
#include "core/svg.hpp"
#include "support/temp_dir.hpp"

using namespace lvef;
using testsupport::TempDir;

namespace {

std::size_t count_occurrences(const std::string& haystack, const std::string& needle) {
    std::size_t count = 0;
    for (std::size_t pos = haystack.find(needle); pos != std::string::npos;
         pos = haystack.find(needle, pos + needle.size())) {
        ++count;
    }
    return count;
}

AreaSeries demo_series() {
    AreaSeries series;
    series.video_id = "demo_video";
    for (int t = 0; t < 90; ++t) {
        series.areas.push_back(500.0 + 180.0 * std::cos(2.0 * 3.14159265358979323846 * t / 30.0));
    }
    return series;
}

} // namespace

TEST_CASE("svg output is byte-identical across calls") {
    const AreaSeries series = demo_series();
    const std::vector<CardiacCycle> cycles{{30, 45}, {60, 75}};
    const std::vector<double> efs{57.2, 54.9};
    const std::string a = render_beat_to_beat_svg(series, cycles, efs, 56.05, "not HFrEF");
    const std::string b = render_beat_to_beat_svg(series, cycles, efs, 56.05, "not HFrEF");
    CHECK(a == b);
}

TEST_CASE("svg carries the header, markers and per-cycle labels") {
    const AreaSeries series = demo_series();
    const std::vector<CardiacCycle> cycles{{30, 45}, {60, 75}};
    const std::vector<double> efs{57.23, 54.9};
    const std::string svg = render_beat_to_beat_svg(series, cycles, efs, 56.08, "HFrEF");

    CHECK(svg.rfind("<svg ", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("demo_video") != std::string::npos);
    CHECK(svg.find("average EF 56.1%") != std::string::npos); // one decimal, rounded
    CHECK(svg.find("EF 57.2%") != std::string::npos);
    CHECK(svg.find("EF 54.9%") != std::string::npos);
    CHECK(svg.find("frame 0") != std::string::npos);
    CHECK(svg.find("frame 89") != std::string::npos);

    // one ED circle per cycle plus the legend circle; same for ES squares
    // (the background and legend add two extra rects)
    CHECK(count_occurrences(svg, "<circle") == cycles.size() + 1);
    CHECK(count_occurrences(svg, "<rect") == cycles.size() + 2);
    CHECK(count_occurrences(svg, "<polyline") == 1);
}

TEST_CASE("svg escapes markup in labels") {
    AreaSeries series = demo_series();
    series.video_id = "a<b&c>d";
    const std::string svg = render_beat_to_beat_svg(series, {}, {}, 50.0, "x<y>");
    CHECK(svg.find("a&lt;b&amp;c&gt;d") != std::string::npos);
    CHECK(svg.find("x&lt;y&gt;") != std::string::npos);
    CHECK(svg.find("a<b") == std::string::npos);
}

TEST_CASE("svg tolerates flat and single-point series") {
    AreaSeries flat;
    flat.video_id = "flat";
    flat.areas.assign(40, 250.0);
    const std::string svg = render_beat_to_beat_svg(flat, {}, {}, 0.0, "n/a");
    CHECK(svg.find("</svg>") != std::string::npos);

    AreaSeries single;
    single.video_id = "single";
    single.areas = {123.0};
    CHECK(render_beat_to_beat_svg(single, {}, {}, 0.0, "n/a").find("</svg>") !=
          std::string::npos);
}

TEST_CASE("svg argument validation") {
    const AreaSeries series = demo_series();
    CHECK_THROWS_AS(render_beat_to_beat_svg({}, {}, {}, 0.0, "x"), Error);
    CHECK_THROWS_AS(render_beat_to_beat_svg(series, {{10, 20}}, {}, 0.0, "x"), Error);
    try {
        render_beat_to_beat_svg(series, {{10, 20}}, {55.0, 44.0}, 0.0, "x");
        FAIL("expected a length mismatch");
    } catch (const Error& e) {
        CHECK(e.code() == errc::length_mismatch);
    }
    try {
        render_beat_to_beat_svg(series, {{10, 500}}, {55.0}, 0.0, "x");
        FAIL("expected an out-of-bounds marker");
    } catch (const Error& e) {
        CHECK(e.code() == errc::out_of_bounds);
    }
    CHECK_THROWS_AS(render_beat_to_beat_svg(series, {{-1, 20}}, {55.0}, 0.0, "x"), Error);
}

TEST_CASE("emit writes exactly the rendered bytes") {
    TempDir dir;
    const AreaSeries series = demo_series();
    const std::vector<CardiacCycle> cycles{{30, 45}};
    const std::vector<double> efs{57.2};
    const std::string path = dir.file("beat.svg");
    emit_beat_to_beat_svg(series, cycles, efs, 57.2, "not HFrEF", path);
    CHECK(read_text_file(path) ==
          render_beat_to_beat_svg(series, cycles, efs, 57.2, "not HFrEF"));
}
