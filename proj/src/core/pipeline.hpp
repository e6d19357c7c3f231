#pragma once

#include <string>
#include <vector>

#include "core/cycles.hpp"
#include "core/dataset.hpp"
#include "core/ensemble.hpp"

namespace lvef {

// Multiplier in the area-length volume V = c * A^2 / L. The default is the
// standard single-plane constant; EF does not depend on the choice.
struct VolumeConstant {
    double c = 8.0 / (3.0 * 3.14159265358979323846);
};

struct CycleVolumes {
    CardiacCycle cycle;
    double ed_area = 0.0;
    double es_area = 0.0;
    double ed_length = 0.0;
    double es_length = 0.0;
    double edv = 0.0;
    double esv = 0.0;
    double ef = 0.0;
};

struct VideoResult {
    std::string video_id;
    std::string method = "all_cycles"; // or "first_cycle" under --single-cycle
    std::vector<CycleVolumes> cycles;  // accepted cycles only
    double ef = 0.0;                   // the value method selects
    double ef_all_cycles = 0.0;
    double ef_first_cycle = 0.0;
    double ef_second_cycle = 0.0; // NaN when fewer than two cycles
    bool hfref = false;           // always from the all-cycle average
    std::vector<std::string> flags;
};

struct PipelineConfig {
    PeakParams peaks;
    double jeffrey_fraction = 0.10;
    VolumeConstant volume_constant;
    bool single_cycle = false; // report ef_first_cycle as the headline value
};

double volume_area_length(double area, double length, const VolumeConstant& k);

double ef_from_volumes(double edv, double esv);

// EF of one cycle in the algebraically reduced form
// 100 * (1 - (es_area^2/es_length) / (ed_area^2/ed_length)), which never
// touches the volume constant, so EF is exactly invariant to it.
double cycle_ef(double ed_area, double ed_length, double es_area, double es_length);

double ef_all_cycles(const std::vector<double>& per_cycle_efs);

// Strict: 39.99 is reduced-EF heart failure, 40.0 is not.
bool classify_hfref(double ef);

// Features -> area series -> cycles -> refined areas + predicted lengths ->
// volumes and EF per cycle. Cycles with EF outside [0, 100) are dropped with
// a flag; no surviving cycle raises NoCycles.
VideoResult run_pipeline(const MaskSequence& masks, const LengthModel& model,
                         const PipelineConfig& config);

void write_result_json(const std::string& path, const VideoResult& result);
VideoResult read_result_json(const std::string& path);

} // namespace lvef
