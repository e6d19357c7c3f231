#pragma once

#include <limits>
#include <string>
#include <vector>

#include "core/dataset.hpp"

namespace lvef {

// Closed ring of pixel-space vertices.
struct Polygon {
    std::vector<Point> vertices;
};

// Per-frame geometry summary. Width and height are peak-to-peak extents of
// the foreground pixels along the principal axes of their coordinate
// covariance (height = major axis), so they are unchanged by 90-degree
// rotations of the mask.
struct LvFrameFeatures {
    int frame_index = 0;
    double area = 0.0;   // foreground pixel count
    double width = 0.0;  // minor-axis extent
    double height = 0.0; // major-axis extent
};

// Contour through the chord endpoints: one side walked apex-to-base, the
// other base-to-apex. Sides are split by signed distance to the long axis,
// ordered by projection onto it.
Polygon polygon_from_trace(const TraceFrame& trace);

// |sum(x_i * y_{i+1} - x_{i+1} * y_i)| / 2; orientation independent.
double shoelace_area(const Polygon& poly);

// Scanline fill: a pixel is set when its center (x+0.5, y+0.5) is inside by
// the even-odd crossing rule. Vertices must lie in [0,width) x [0,height).
Mask rasterize_polygon(const Polygon& poly, int width, int height);

LvFrameFeatures extract_features(const Mask& mask, int frame_index);

// Euclidean length of the first (long-axis) segment.
double trace_length(const TraceFrame& trace);

// 2|a n b| / (|a| + |b|); 1.0 when both masks are empty.
double dice(const Mask& a, const Mask& b);

// One row of the features CSV. length is NaN for unlabeled frames; split is
// empty when the source table had no split column.
struct FeatureRow {
    std::string video_id;
    int frame_index = 0;
    double area = 0.0;
    double width = 0.0;
    double height = 0.0;
    double length = std::numeric_limits<double>::quiet_NaN();
    std::string split;
};

// Columns: video_id, frame_index, area, width, height[, length][, split].
// The optional columns are written only when some row carries them.
std::vector<FeatureRow> read_features_csv(const std::string& path);
void write_features_csv(const std::string& path, const std::vector<FeatureRow>& rows);

} // namespace lvef
