#pragma once

#include <string>
#include <vector>

namespace lvef {

struct AreaSeries {
    std::string video_id;
    std::vector<double> areas; // one value per frame
};

struct PeakParams {
    int min_distance = 20;            // frames between accepted peaks
    double prominence_fraction = 0.5; // of (global max - global min)
};

struct CardiacCycle {
    int ed_frame = 0;
    int es_frame = 0; // always > ed_frame, with a smaller area
};

// Local maxima (plateaus count once, at their first index) whose topographic
// prominence reaches prominence_fraction of the series range, thinned so no
// two results are closer than min_distance frames; the higher peak wins a
// conflict, the earlier one on equal height. Indices ascend.
std::vector<int> find_peaks(const std::vector<double>& values, const PeakParams& params);

// ED frames are peaks of the series, ES frames peaks of its negation. Each
// ED is paired with the smallest-area ES candidate strictly before the next
// ED (or the series end); EDs without a following candidate are dropped.
std::vector<CardiacCycle> detect_cycles(const AreaSeries& series, const PeakParams& params);

// Columns: video_id, cycle_index, ed_frame, es_frame.
void write_cycles_csv(const std::string& path, const std::string& video_id,
                      const std::vector<CardiacCycle>& cycles);

} // namespace lvef
