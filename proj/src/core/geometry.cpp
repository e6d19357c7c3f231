#include "core/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "core/csv.hpp"
#include "core/errors.hpp"

namespace lvef {

namespace {

double euclid(const Point& a, const Point& b) {
    return std::hypot(b.x - a.x, b.y - a.y);
}

} // namespace

Polygon polygon_from_trace(const TraceFrame& trace) {
    if (trace.segments.size() < 2) {
        fail(errc::degenerate_trace,
             "trace for '" + trace.file_name + "' frame " + std::to_string(trace.frame_index) +
                 " has no chords");
    }
    const Segment& axis = trace.segments.front();
    const double dx = axis.p2.x - axis.p1.x;
    const double dy = axis.p2.y - axis.p1.y;
    const double len2 = dx * dx + dy * dy;
    if (len2 == 0.0) {
        fail(errc::degenerate_trace,
             "zero-length long axis in '" + trace.file_name + "' frame " +
                 std::to_string(trace.frame_index));
    }

    // Signed area of (axis direction) x (axis.p1 -> p): sign tells the side.
    auto side = [&](const Point& p) { return dx * (p.y - axis.p1.y) - dy * (p.x - axis.p1.x); };
    auto param = [&](double x, double y) {
        return ((x - axis.p1.x) * dx + (y - axis.p1.y) * dy) / len2;
    };

    struct Chord {
        double t;
        Point low;  // side() smaller
        Point high; // side() larger
    };
    std::vector<Chord> chords;
    chords.reserve(trace.segments.size() - 1);
    for (std::size_t i = 1; i < trace.segments.size(); ++i) {
        const Segment& c = trace.segments[i];
        Chord ch;
        ch.t = param(0.5 * (c.p1.x + c.p2.x), 0.5 * (c.p1.y + c.p2.y));
        ch.low = c.p1;
        ch.high = c.p2;
        if (side(ch.low) > side(ch.high)) std::swap(ch.low, ch.high);
        chords.push_back(ch);
    }
    std::stable_sort(chords.begin(), chords.end(),
                     [](const Chord& a, const Chord& b) { return a.t < b.t; });

    Polygon poly;
    poly.vertices.reserve(2 * chords.size());
    for (const Chord& c : chords) poly.vertices.push_back(c.low);
    for (auto it = chords.rbegin(); it != chords.rend(); ++it) poly.vertices.push_back(it->high);

    std::vector<Point> distinct;
    for (const Point& p : poly.vertices) {
        bool seen = false;
        for (const Point& q : distinct) {
            if (p.x == q.x && p.y == q.y) {
                seen = true;
                break;
            }
        }
        if (!seen) distinct.push_back(p);
    }
    if (distinct.size() < 3 || shoelace_area(poly) == 0.0) {
        fail(errc::degenerate_trace,
             "chord endpoints of '" + trace.file_name + "' frame " +
                 std::to_string(trace.frame_index) + " do not span a polygon");
    }
    return poly;
}

double shoelace_area(const Polygon& poly) {
    const auto& v = poly.vertices;
    if (v.size() < 3) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point& a = v[i];
        const Point& b = v[(i + 1) % v.size()];
        acc += a.x * b.y - b.x * a.y;
    }
    return std::abs(acc) / 2.0;
}

Mask rasterize_polygon(const Polygon& poly, int width, int height) {
    if (poly.vertices.size() < 3) {
        fail(errc::invalid_argument, "polygon needs at least 3 vertices");
    }
    if (width <= 0 || height <= 0) {
        fail(errc::invalid_argument, "mask dimensions must be positive");
    }
    for (const Point& p : poly.vertices) {
        if (!(p.x >= 0.0 && p.x < width && p.y >= 0.0 && p.y < height)) {
            fail(errc::out_of_bounds,
                 "vertex (" + csv::format_double(p.x) + ", " + csv::format_double(p.y) +
                     ") outside " + std::to_string(width) + "x" + std::to_string(height));
        }
    }

    Mask mask(width, height);
    const auto& v = poly.vertices;
    const std::size_t n = v.size();
    std::vector<double> xs;
    for (int y = 0; y < height; ++y) {
        const double py = y + 0.5;
        xs.clear();
        for (std::size_t i = 0; i < n; ++i) {
            const Point& a = v[i];
            const Point& b = v[(i + 1) % n];
            // Half-open span in y so a vertex on the scanline counts once.
            if ((a.y <= py) != (b.y <= py)) {
                xs.push_back(a.x + (py - a.y) * (b.x - a.x) / (b.y - a.y));
            }
        }
        if (xs.empty()) continue;
        std::sort(xs.begin(), xs.end());
        for (int x = 0; x < width; ++x) {
            const double px = x + 0.5;
            const auto greater = xs.end() - std::upper_bound(xs.begin(), xs.end(), px);
            if (greater % 2 != 0) mask.set(x, y, true);
        }
    }
    return mask;
}

LvFrameFeatures extract_features(const Mask& mask, int frame_index) {
    LvFrameFeatures f;
    f.frame_index = frame_index;

    std::vector<std::pair<int, int>> pts;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (mask.at(x, y)) pts.emplace_back(x, y);
        }
    }
    f.area = static_cast<double>(pts.size());
    if (pts.empty()) return f;

    double mx = 0.0;
    double my = 0.0;
    for (const auto& [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= f.area;
    my /= f.area;

    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (const auto& [x, y] : pts) {
        const double cx = x - mx;
        const double cy = y - my;
        sxx += cx * cx;
        sxy += cx * cy;
        syy += cy * cy;
    }
    sxx /= f.area;
    sxy /= f.area;
    syy /= f.area;

    // Major axis of the 2x2 covariance, with an eigenvalue tie resolved
    // toward the image y-axis.
    double ux;
    double uy;
    if (sxy == 0.0) {
        if (sxx > syy) {
            ux = 1.0;
            uy = 0.0;
        } else {
            ux = 0.0;
            uy = 1.0;
        }
    } else {
        const double disc = std::sqrt((sxx - syy) * (sxx - syy) + 4.0 * sxy * sxy);
        const double l1 = 0.5 * (sxx + syy + disc);
        ux = sxy;
        uy = l1 - sxx;
        const double norm = std::hypot(ux, uy);
        ux /= norm;
        uy /= norm;
    }

    double min_u = std::numeric_limits<double>::infinity();
    double max_u = -min_u;
    double min_v = min_u;
    double max_v = -min_u;
    for (const auto& [x, y] : pts) {
        const double u = x * ux + y * uy;
        const double w = -x * uy + y * ux;
        min_u = std::min(min_u, u);
        max_u = std::max(max_u, u);
        min_v = std::min(min_v, w);
        max_v = std::max(max_v, w);
    }
    f.height = max_u - min_u;
    f.width = max_v - min_v;
    return f;
}

double trace_length(const TraceFrame& trace) {
    if (trace.segments.empty()) {
        fail(errc::degenerate_trace,
             "trace for '" + trace.file_name + "' frame " + std::to_string(trace.frame_index) +
                 " has no segments");
    }
    const Segment& axis = trace.segments.front();
    return euclid(axis.p1, axis.p2);
}

double dice(const Mask& a, const Mask& b) {
    if (a.width != b.width || a.height != b.height) {
        fail(errc::dimension_mismatch,
             "dice over " + std::to_string(a.width) + "x" + std::to_string(a.height) + " vs " +
                 std::to_string(b.width) + "x" + std::to_string(b.height));
    }
    std::size_t na = 0;
    std::size_t nb = 0;
    std::size_t both = 0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const bool pa = a.data[i] != 0;
        const bool pb = b.data[i] != 0;
        na += pa;
        nb += pb;
        both += pa && pb;
    }
    if (na + nb == 0) return 1.0;
    return 2.0 * static_cast<double>(both) / static_cast<double>(na + nb);
}

std::vector<FeatureRow> read_features_csv(const std::string& path) {
    const csv::Table table = csv::read_file(path);
    const std::size_t c_video = table.require_column("video_id");
    const std::size_t c_frame = table.require_column("frame_index");
    const std::size_t c_area = table.require_column("area");
    const std::size_t c_width = table.require_column("width");
    const std::size_t c_height = table.require_column("height");
    const std::optional<std::size_t> c_length = table.column("length");
    const std::optional<std::size_t> c_split = table.column("split");

    std::vector<FeatureRow> rows;
    rows.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& cells = table.rows[i];
        const std::size_t line = table.line_numbers[i];
        FeatureRow row;
        row.video_id = cells[c_video];
        row.frame_index = static_cast<int>(csv::parse_long(cells[c_frame], line, "frame_index"));
        row.area = csv::parse_double(cells[c_area], line, "area");
        row.width = csv::parse_double(cells[c_width], line, "width");
        row.height = csv::parse_double(cells[c_height], line, "height");
        row.length = std::numeric_limits<double>::quiet_NaN();
        if (c_length && !cells[*c_length].empty()) {
            row.length = csv::parse_double(cells[*c_length], line, "length");
        }
        if (c_split) row.split = cells[*c_split];
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_features_csv(const std::string& path, const std::vector<FeatureRow>& rows) {
    bool any_length = false;
    bool any_split = false;
    for (const FeatureRow& row : rows) {
        any_length = any_length || std::isfinite(row.length);
        any_split = any_split || !row.split.empty();
    }

    csv::Table table;
    table.header = {"video_id", "frame_index", "area", "width", "height"};
    if (any_length) table.header.push_back("length");
    if (any_split) table.header.push_back("split");
    table.rows.reserve(rows.size());
    for (const FeatureRow& row : rows) {
        std::vector<std::string> cells = {row.video_id, std::to_string(row.frame_index),
                                          csv::format_double(row.area),
                                          csv::format_double(row.width),
                                          csv::format_double(row.height)};
        if (any_length) {
            cells.push_back(std::isfinite(row.length) ? csv::format_double(row.length) : "");
        }
        if (any_split) cells.push_back(row.split);
        table.rows.push_back(std::move(cells));
    }
    csv::write_file(path, table);
}

} // namespace lvef
