#include "core/refine.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "core/errors.hpp"
#include "core/stats.hpp"

namespace lvef {

namespace {

std::size_t selection_count(double fraction, std::size_t n) {
    const auto k = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
    return std::max<std::size_t>(k, 1);
}

// Mean of {anchor} + the k_all most extreme series values + the k_window most
// extreme window values, where "extreme" means largest when descending.
double refined_mean(const std::vector<double>& sorted_all, const std::vector<double>& sorted_window,
                    double anchor, std::size_t k_all, std::size_t k_window) {
    double sum = anchor;
    std::size_t count = 1;
    for (std::size_t i = 0; i < k_all; ++i, ++count) sum += sorted_all[i];
    for (std::size_t i = 0; i < k_window; ++i, ++count) sum += sorted_window[i];
    return sum / static_cast<double>(count);
}

} // namespace

std::pair<double, double> refine_cycle_areas(const AreaSeries& series, const CardiacCycle& cycle,
                                             double fraction) {
    const std::vector<double>& areas = series.areas;
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        fail(errc::invalid_argument, "fraction must be in (0, 1]");
    }
    if (cycle.ed_frame < 0 || cycle.es_frame <= cycle.ed_frame ||
        cycle.es_frame >= static_cast<int>(areas.size())) {
        fail(errc::invalid_cycle, "cycle " + std::to_string(cycle.ed_frame) + ".." +
                                      std::to_string(cycle.es_frame) + " does not fit a series of " +
                                      std::to_string(areas.size()) + " frames");
    }

    std::vector<double> descending_all(areas);
    std::sort(descending_all.begin(), descending_all.end(), std::greater<>());
    std::vector<double> descending_window(areas.begin() + cycle.ed_frame,
                                          areas.begin() + cycle.es_frame + 1);
    std::sort(descending_window.begin(), descending_window.end(), std::greater<>());

    std::vector<double> ascending_all(descending_all.rbegin(), descending_all.rend());
    std::vector<double> ascending_window(descending_window.rbegin(), descending_window.rend());

    const std::size_t k_all = selection_count(fraction, areas.size());
    const std::size_t k_window = selection_count(fraction, descending_window.size());

    const double ed = refined_mean(descending_all, descending_window, areas[cycle.ed_frame],
                                   k_all, k_window);
    const double es = refined_mean(ascending_all, ascending_window, areas[cycle.es_frame],
                                   k_all, k_window);
    return {ed, es};
}

std::pair<double, double> percentile_baseline(const AreaSeries& series) {
    if (series.areas.empty()) {
        fail(errc::insufficient_data, "percentile baseline needs at least one frame");
    }
    std::vector<double> sorted(series.areas);
    std::sort(sorted.begin(), sorted.end());
    return {stats::percentile(sorted, 90.0), stats::percentile(sorted, 10.0)};
}

} // namespace lvef
