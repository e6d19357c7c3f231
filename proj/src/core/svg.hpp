#pragma once

#include <string>
#include <vector>

#include "core/cycles.hpp"

namespace lvef {

// Renders the area-vs-frame curve with ED and ES markers, one EF label per
// cycle, and a header carrying the average EF plus the phenotype label.
// Output bytes depend only on the arguments.
std::string render_beat_to_beat_svg(const AreaSeries& series,
                                    const std::vector<CardiacCycle>& cycles,
                                    const std::vector<double>& per_cycle_efs, double ef_all,
                                    const std::string& phenotype_label);

void emit_beat_to_beat_svg(const AreaSeries& series, const std::vector<CardiacCycle>& cycles,
                           const std::vector<double>& per_cycle_efs, double ef_all,
                           const std::string& phenotype_label, const std::string& out_path);

} // namespace lvef
