#include "doctest.h"

#include <vector>

#include "core/errors.hpp"
#include "core/refine.hpp"

using namespace lvef;

namespace {

AreaSeries series_of(std::vector<double> areas) {
    AreaSeries s;
    s.video_id = "v";
    s.areas = std::move(areas);
    return s;
}

} // namespace

TEST_CASE("refined areas on the descending ten-frame example") {
    // 10 frames, ceil(0.1*10) = 1 from the series and 1 from the window, so
    // ED = mean(10, 10, 10) and ES = mean(1, 1, 1).
    const AreaSeries s = series_of({10, 9, 8, 7, 6, 5, 4, 3, 2, 1});
    const auto [ed, es] = refine_cycle_areas(s, {0, 9}, 0.10);
    CHECK(ed == doctest::Approx(10.0));
    CHECK(es == doctest::Approx(1.0));
}

TEST_CASE("refined areas pool the anchor, series top slice, and window top slice") {
    // series of 5 -> ceil(0.5*5)=3 from the series; window [1,3] has 3 frames
    // -> ceil(0.5*3)=2 from the window.
    const AreaSeries s = series_of({40, 100, 60, 20, 80});
    const auto [ed, es] = refine_cycle_areas(s, {1, 3}, 0.5);
    // ED: anchor 100; top-3 of series {100, 80, 60}; top-2 of window {100, 60}
    CHECK(ed == doctest::Approx((100.0 + (100 + 80 + 60) + (100 + 60)) / 6.0));
    // ES: anchor 20; bottom-3 of series {20, 40, 60}; bottom-2 of window {20, 60}
    CHECK(es == doctest::Approx((20.0 + (20 + 40 + 60) + (20 + 60)) / 6.0));
}

TEST_CASE("refinement damps an isolated spike at the detected frame") {
    // clean plateau at 100 with a spike 160 at the detected ED
    std::vector<double> areas(50, 60.0);
    for (int i = 0; i < 10; ++i) areas[static_cast<std::size_t>(i)] = 100.0;
    areas[0] = 160.0;
    const AreaSeries s = series_of(areas);
    const auto [ed, es] = refine_cycle_areas(s, {0, 49}, 0.10);
    CHECK(ed < 160.0);
    CHECK(ed > 100.0);
    CHECK(es == doctest::Approx(60.0));
}

TEST_CASE("single-element slices still work") {
    const AreaSeries s = series_of({1, 2, 3, 4, 5});
    const auto [ed, es] = refine_cycle_areas(s, {3, 4}, 0.2);
    // ceil(0.2 * 5) = 1 from the series, ceil(0.2 * 2) = 1 from the window
    // ED: anchor 4, series top 5, window [4,5] top 5
    CHECK(ed == doctest::Approx((4.0 + 5.0 + 5.0) / 3.0));
    // ES: anchor 5, series bottom 1, window bottom 4
    CHECK(es == doctest::Approx((5.0 + 1.0 + 4.0) / 3.0));
}

TEST_CASE("refine validates the fraction and the cycle") {
    const AreaSeries s = series_of({3, 2, 1});
    CHECK_THROWS_AS(refine_cycle_areas(s, {0, 2}, 0.0), Error);
    CHECK_THROWS_AS(refine_cycle_areas(s, {0, 2}, 1.5), Error);
    CHECK_THROWS_AS(refine_cycle_areas(s, {2, 0}, 0.1), Error);
    CHECK_THROWS_AS(refine_cycle_areas(s, {0, 5}, 0.1), Error);
    CHECK_THROWS_AS(refine_cycle_areas(s, {-1, 2}, 0.1), Error);
    try {
        refine_cycle_areas(s, {2, 0}, 0.1);
    } catch (const Error& e) {
        CHECK(e.code() == errc::invalid_cycle);
    }
}

TEST_CASE("percentile baseline picks the 90th and 10th percentiles") {
    // 0..10 sorted: 90th percentile = 9.0, 10th = 1.0 by linear interpolation
    const AreaSeries s = series_of({10, 0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
    const auto [ed, es] = percentile_baseline(s);
    CHECK(ed == doctest::Approx(9.0));
    CHECK(es == doctest::Approx(1.0));
    CHECK_THROWS_AS(percentile_baseline(series_of({})), Error);
}
