#include "core/cycles.hpp"

#include <algorithm>
#include <cstddef>
#include <limits>

#include "core/csv.hpp"
#include "core/errors.hpp"

namespace lvef {

namespace {

void check_params(const PeakParams& params) {
    if (params.min_distance < 1) {
        fail(errc::invalid_argument, "min_distance must be at least 1");
    }
    if (!(params.prominence_fraction > 0.0 && params.prominence_fraction < 1.0)) {
        fail(errc::invalid_argument, "prominence_fraction must be in (0, 1)");
    }
}

// First indices of strict local maxima; a flat run counts when the values on
// both sides of the whole run are lower.
std::vector<int> plateau_maxima(const std::vector<double>& v) {
    std::vector<int> out;
    const std::size_t n = v.size();
    std::size_t i = 1;
    while (i + 1 < n) {
        if (v[i - 1] < v[i]) {
            std::size_t j = i;
            while (j + 1 < n && v[j + 1] == v[i]) ++j;
            if (j + 1 < n && v[j + 1] < v[i]) out.push_back(static_cast<int>(i));
            i = j + 1;
        } else {
            ++i;
        }
    }
    return out;
}

// Lowest point between the peak and the nearest strictly higher value (or
// the series end) on each side; prominence is the drop to the higher of the
// two side minima.
double prominence(const std::vector<double>& v, int peak) {
    const double h = v[peak];
    double left = h;
    for (int k = peak - 1; k >= 0; --k) {
        if (v[k] > h) break;
        left = std::min(left, v[k]);
    }
    double right = h;
    for (int k = peak + 1; k < static_cast<int>(v.size()); ++k) {
        if (v[k] > h) break;
        right = std::min(right, v[k]);
    }
    return h - std::max(left, right);
}

} // namespace

std::vector<int> find_peaks(const std::vector<double>& values, const PeakParams& params) {
    check_params(params);
    if (values.size() < 3) return {};

    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double threshold = params.prominence_fraction * (*hi_it - *lo_it);

    std::vector<int> candidates;
    for (int idx : plateau_maxima(values)) {
        if (prominence(values, idx) >= threshold) candidates.push_back(idx);
    }

    std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
        if (values[a] != values[b]) return values[a] > values[b];
        return a < b;
    });
    std::vector<int> accepted;
    for (int idx : candidates) {
        bool blocked = false;
        for (int kept : accepted) {
            if (std::abs(idx - kept) < params.min_distance) {
                blocked = true;
                break;
            }
        }
        if (!blocked) accepted.push_back(idx);
    }
    std::sort(accepted.begin(), accepted.end());
    return accepted;
}

std::vector<CardiacCycle> detect_cycles(const AreaSeries& series, const PeakParams& params) {
    const std::vector<double>& areas = series.areas;
    const std::vector<int> eds = find_peaks(areas, params);

    std::vector<double> negated(areas.size());
    std::transform(areas.begin(), areas.end(), negated.begin(), [](double a) { return -a; });
    const std::vector<int> ess = find_peaks(negated, params);

    std::vector<CardiacCycle> cycles;
    for (std::size_t k = 0; k < eds.size(); ++k) {
        const int ed = eds[k];
        const int limit =
            (k + 1 < eds.size()) ? eds[k + 1] : static_cast<int>(areas.size());
        int best = -1;
        for (int es : ess) {
            if (es <= ed) continue;
            if (es >= limit) break;
            if (best < 0 || areas[es] < areas[best]) best = es;
        }
        if (best < 0) continue;
        if (!(areas[ed] > areas[best])) continue;
        cycles.push_back({ed, best});
    }
    return cycles;
}

void write_cycles_csv(const std::string& path, const std::string& video_id,
                      const std::vector<CardiacCycle>& cycles) {
    csv::Table table;
    table.header = {"video_id", "cycle_index", "ed_frame", "es_frame"};
    for (std::size_t i = 0; i < cycles.size(); ++i) {
        table.rows.push_back({video_id, std::to_string(i), std::to_string(cycles[i].ed_frame),
                              std::to_string(cycles[i].es_frame)});
    }
    csv::write_file(path, table);
}

} // namespace lvef
