#include "core/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "core/errors.hpp"
#include "core/io.hpp"

namespace lvef {

namespace {

constexpr double kWidth = 960.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 64.0;
constexpr double kRight = 24.0;
constexpr double kTop = 56.0;
constexpr double kBottom = 44.0;

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

std::string render_beat_to_beat_svg(const AreaSeries& series,
                                    const std::vector<CardiacCycle>& cycles,
                                    const std::vector<double>& per_cycle_efs, double ef_all,
                                    const std::string& phenotype_label) {
    if (series.areas.empty()) fail(errc::invalid_argument, "cannot plot an empty series");
    if (cycles.size() != per_cycle_efs.size()) {
        fail(errc::length_mismatch, std::to_string(cycles.size()) + " cycles vs " +
                                        std::to_string(per_cycle_efs.size()) + " EF values");
    }
    for (const CardiacCycle& cycle : cycles) {
        if (cycle.ed_frame < 0 || cycle.es_frame < 0 ||
            static_cast<std::size_t>(cycle.ed_frame) >= series.areas.size() ||
            static_cast<std::size_t>(cycle.es_frame) >= series.areas.size()) {
            fail(errc::out_of_bounds, "cycle marker outside the plotted series");
        }
    }

    const std::size_t n = series.areas.size();
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const double lo = *std::min_element(series.areas.begin(), series.areas.end());
    const double hi = *std::max_element(series.areas.begin(), series.areas.end());
    const double span = hi > lo ? hi - lo : 1.0;

    auto px = [&](double frame) {
        if (n == 1) return kLeft + plot_w / 2.0;
        return kLeft + frame * plot_w / static_cast<double>(n - 1);
    };
    auto py = [&](double area) {
        if (hi == lo) return kTop + plot_h / 2.0;
        return kTop + (1.0 - (area - lo) / span) * plot_h;
    };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(kWidth, 0)
        << "\" height=\"" << fixed(kHeight, 0) << "\" viewBox=\"0 0 " << fixed(kWidth, 0) << " "
        << fixed(kHeight, 0) << "\">\n";
    out << "  <rect x=\"0\" y=\"0\" width=\"" << fixed(kWidth, 0) << "\" height=\""
        << fixed(kHeight, 0) << "\" fill=\"#ffffff\"/>\n";

    out << "  <text x=\"" << fixed(kLeft, 0)
        << "\" y=\"22\" font-family=\"monospace\" font-size=\"15\" fill=\"#111111\">"
        << escape(series.video_id) << "  average EF " << fixed(ef_all, 1) << "%  "
        << escape(phenotype_label) << "</text>\n";

    // Axes with min/max labels.
    out << "  <line x1=\"" << fixed(kLeft, 1) << "\" y1=\"" << fixed(kTop, 1) << "\" x2=\""
        << fixed(kLeft, 1) << "\" y2=\"" << fixed(kTop + plot_h, 1)
        << "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
    out << "  <line x1=\"" << fixed(kLeft, 1) << "\" y1=\"" << fixed(kTop + plot_h, 1)
        << "\" x2=\"" << fixed(kLeft + plot_w, 1) << "\" y2=\"" << fixed(kTop + plot_h, 1)
        << "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
    out << "  <text x=\"8\" y=\"" << fixed(kTop + 4, 1)
        << "\" font-family=\"monospace\" font-size=\"11\" fill=\"#444444\">" << fixed(hi, 0)
        << "</text>\n";
    out << "  <text x=\"8\" y=\"" << fixed(kTop + plot_h, 1)
        << "\" font-family=\"monospace\" font-size=\"11\" fill=\"#444444\">" << fixed(lo, 0)
        << "</text>\n";
    out << "  <text x=\"" << fixed(kLeft, 1) << "\" y=\"" << fixed(kHeight - 12, 1)
        << "\" font-family=\"monospace\" font-size=\"11\" fill=\"#444444\">frame 0</text>\n";
    out << "  <text x=\"" << fixed(kLeft + plot_w - 70, 1) << "\" y=\"" << fixed(kHeight - 12, 1)
        << "\" font-family=\"monospace\" font-size=\"11\" fill=\"#444444\">frame "
        << (n - 1) << "</text>\n";
    out << "  <text x=\"8\" y=\"" << fixed(kTop - 10, 1)
        << "\" font-family=\"monospace\" font-size=\"11\" fill=\"#444444\">LV area</text>\n";

    out << "  <polyline fill=\"none\" stroke=\"#2c7f5e\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) out << ' ';
        out << fixed(px(static_cast<double>(i)), 1) << ',' << fixed(py(series.areas[i]), 1);
    }
    out << "\"/>\n";

    for (std::size_t c = 0; c < cycles.size(); ++c) {
        const CardiacCycle& cycle = cycles[c];
        const double edx = px(cycle.ed_frame);
        const double edy = py(series.areas[static_cast<std::size_t>(cycle.ed_frame)]);
        const double esx = px(cycle.es_frame);
        const double esy = py(series.areas[static_cast<std::size_t>(cycle.es_frame)]);
        out << "  <circle cx=\"" << fixed(edx, 1) << "\" cy=\"" << fixed(edy, 1)
            << "\" r=\"4.5\" fill=\"#d62728\"/>\n";
        out << "  <rect x=\"" << fixed(esx - 4.0, 1) << "\" y=\"" << fixed(esy - 4.0, 1)
            << "\" width=\"8\" height=\"8\" fill=\"#1f77b4\"/>\n";
        out << "  <text x=\"" << fixed((edx + esx) / 2.0, 1) << "\" y=\"" << fixed(kTop - 6, 1)
            << "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\" "
               "fill=\"#111111\">EF "
            << fixed(per_cycle_efs[c], 1) << "%</text>\n";
    }

    // Legend.
    out << "  <circle cx=\"" << fixed(kWidth - 150, 1)
        << "\" cy=\"18\" r=\"4.5\" fill=\"#d62728\"/>\n";
    out << "  <text x=\"" << fixed(kWidth - 140, 1)
        << "\" y=\"22\" font-family=\"monospace\" font-size=\"12\" fill=\"#111111\">ED</text>\n";
    out << "  <rect x=\"" << fixed(kWidth - 104, 1)
        << "\" y=\"13\" width=\"8\" height=\"8\" fill=\"#1f77b4\"/>\n";
    out << "  <text x=\"" << fixed(kWidth - 90, 1)
        << "\" y=\"22\" font-family=\"monospace\" font-size=\"12\" fill=\"#111111\">ES</text>\n";
    out << "</svg>\n";
    return out.str();
}

void emit_beat_to_beat_svg(const AreaSeries& series, const std::vector<CardiacCycle>& cycles,
                           const std::vector<double>& per_cycle_efs, double ef_all,
                           const std::string& phenotype_label, const std::string& out_path) {
    write_text_atomic(out_path,
                      render_beat_to_beat_svg(series, cycles, per_cycle_efs, ef_all,
                                              phenotype_label));
}

} // namespace lvef
