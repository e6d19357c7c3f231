#pragma once

#include <utility>

#include "core/cycles.hpp"

namespace lvef {

// Outlier-robust ED/ES areas for one cycle. The ED value is the mean of the
// raw ED-frame area, the top ceil(fraction*N) areas of the whole series, and
// the top ceil(fraction*M) areas of the ED..ES window (M = window length,
// counts at least 1 each). The ES value mirrors this with ascending sorts.
std::pair<double, double> refine_cycle_areas(const AreaSeries& series, const CardiacCycle& cycle,
                                             double fraction = 0.10);

// ed_area = 90th percentile of the series, es_area = 10th percentile, with
// linear interpolation between order statistics.
std::pair<double, double> percentile_baseline(const AreaSeries& series);

} // namespace lvef
