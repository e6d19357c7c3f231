#include "core/pipeline.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "json.hpp"

#include "core/errors.hpp"
#include "core/geometry.hpp"
#include "core/io.hpp"
#include "core/refine.hpp"

namespace lvef {

namespace {

using nlohmann::json;

std::string cycle_tag(const CardiacCycle& cycle) {
    return "cycle ed=" + std::to_string(cycle.ed_frame) +
           " es=" + std::to_string(cycle.es_frame);
}

} // namespace

double volume_area_length(double area, double length, const VolumeConstant& k) {
    if (!(k.c > 0.0)) fail(errc::invalid_argument, "volume constant must be positive");
    if (area < 0.0) fail(errc::invalid_argument, "negative area");
    if (!(length > 0.0)) {
        fail(errc::zero_length, "area-length volume needs a positive length");
    }
    return k.c * area * area / length;
}

double ef_from_volumes(double edv, double esv) {
    if (!(edv > 0.0)) {
        fail(errc::non_positive_edv, "ejection fraction needs a positive end-diastolic volume");
    }
    return 100.0 * (edv - esv) / edv;
}

double cycle_ef(double ed_area, double ed_length, double es_area, double es_length) {
    if (!(ed_length > 0.0) || !(es_length > 0.0)) {
        fail(errc::zero_length, "cycle EF needs positive lengths");
    }
    const double ed_term = ed_area * ed_area / ed_length;
    const double es_term = es_area * es_area / es_length;
    if (!(ed_term > 0.0)) {
        fail(errc::non_positive_edv, "cycle EF needs a positive end-diastolic term");
    }
    return 100.0 * (1.0 - es_term / ed_term);
}

double ef_all_cycles(const std::vector<double>& per_cycle_efs) {
    if (per_cycle_efs.empty()) fail(errc::no_cycles, "no accepted cycles to average");
    const double sum = std::accumulate(per_cycle_efs.begin(), per_cycle_efs.end(), 0.0);
    return sum / static_cast<double>(per_cycle_efs.size());
}

bool classify_hfref(double ef) {
    if (!std::isfinite(ef)) fail(errc::non_finite_input, "ejection fraction is not finite");
    return ef < 40.0;
}

VideoResult run_pipeline(const MaskSequence& masks, const LengthModel& model,
                         const PipelineConfig& config) {
    if (masks.frames.empty()) fail(errc::invalid_argument, "mask sequence has no frames");
    if (!model.trained) fail(errc::untrained_model, "length model is untrained");

    VideoResult result;
    result.video_id = masks.video_id;
    result.method = config.single_cycle ? "first_cycle" : "all_cycles";

    std::vector<LvFrameFeatures> features;
    features.reserve(masks.frames.size());
    AreaSeries series;
    series.video_id = masks.video_id;
    for (std::size_t i = 0; i < masks.frames.size(); ++i) {
        features.push_back(extract_features(masks.frames[i], static_cast<int>(i)));
        series.areas.push_back(features.back().area);
    }

    const std::vector<CardiacCycle> cycles = detect_cycles(series, config.peaks);
    if (cycles.empty()) {
        fail(errc::no_cycles, "no cardiac cycle detected in '" + masks.video_id + "'");
    }

    std::vector<double> efs;
    for (const CardiacCycle& cycle : cycles) {
        try {
            const auto [ed_area, es_area] =
                refine_cycle_areas(series, cycle, config.jeffrey_fraction);
            const LvFrameFeatures& fed = features[static_cast<std::size_t>(cycle.ed_frame)];
            const LvFrameFeatures& fes = features[static_cast<std::size_t>(cycle.es_frame)];
            CycleVolumes volumes;
            volumes.cycle = cycle;
            volumes.ed_area = ed_area;
            volumes.es_area = es_area;
            volumes.ed_length =
                predict_length(model, {fed.area, fed.width, fed.height});
            volumes.es_length =
                predict_length(model, {fes.area, fes.width, fes.height});
            volumes.edv = volume_area_length(ed_area, volumes.ed_length, config.volume_constant);
            volumes.esv = volume_area_length(es_area, volumes.es_length, config.volume_constant);
            volumes.ef = cycle_ef(ed_area, volumes.ed_length, es_area, volumes.es_length);
            if (!(volumes.ef >= 0.0 && volumes.ef < 100.0)) {
                result.flags.push_back(cycle_tag(cycle) + ": EF " + std::to_string(volumes.ef) +
                                       " outside [0, 100), cycle rejected");
                continue;
            }
            result.cycles.push_back(volumes);
            efs.push_back(volumes.ef);
        } catch (const Error& e) {
            result.flags.push_back(cycle_tag(cycle) + ": " + e.what() + ", cycle rejected");
        }
    }

    if (efs.empty()) {
        fail(errc::no_cycles, "all " + std::to_string(cycles.size()) +
                                  " detected cycles were rejected in '" + masks.video_id + "'");
    }
    result.ef_all_cycles = ef_all_cycles(efs);
    result.ef_first_cycle = efs.front();
    result.ef_second_cycle =
        efs.size() > 1 ? efs[1] : std::numeric_limits<double>::quiet_NaN();
    result.hfref = classify_hfref(result.ef_all_cycles);
    result.ef = config.single_cycle ? result.ef_first_cycle : result.ef_all_cycles;
    return result;
}

void write_result_json(const std::string& path, const VideoResult& result) {
    json doc;
    doc["video_id"] = result.video_id;
    doc["method"] = result.method;
    json cycles = json::array();
    for (const CycleVolumes& v : result.cycles) {
        cycles.push_back({{"ed_frame", v.cycle.ed_frame},
                          {"es_frame", v.cycle.es_frame},
                          {"ed_area", v.ed_area},
                          {"es_area", v.es_area},
                          {"ed_length", v.ed_length},
                          {"es_length", v.es_length},
                          {"edv", v.edv},
                          {"esv", v.esv},
                          {"ef", v.ef}});
    }
    doc["cycles"] = cycles;
    doc["ef"] = result.ef;
    doc["ef_all_cycles"] = result.ef_all_cycles;
    doc["ef_first_cycle"] = result.ef_first_cycle;
    if (std::isfinite(result.ef_second_cycle)) {
        doc["ef_second_cycle"] = result.ef_second_cycle;
    }
    doc["hfref"] = result.hfref;
    doc["flags"] = result.flags;
    write_text_atomic(path, doc.dump(2) + "\n");
}

VideoResult read_result_json(const std::string& path) {
    const std::string text = read_text_file(path);
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        fail(errc::invalid_argument, "'" + path + "' is not valid JSON: " + e.what());
    }
    VideoResult result;
    try {
        result.video_id = doc.at("video_id").get<std::string>();
        result.method = doc.value("method", std::string("all_cycles"));
        for (const json& c : doc.at("cycles")) {
            CycleVolumes v;
            v.cycle.ed_frame = c.at("ed_frame").get<int>();
            v.cycle.es_frame = c.at("es_frame").get<int>();
            v.ed_area = c.at("ed_area").get<double>();
            v.es_area = c.at("es_area").get<double>();
            v.ed_length = c.at("ed_length").get<double>();
            v.es_length = c.at("es_length").get<double>();
            v.edv = c.at("edv").get<double>();
            v.esv = c.at("esv").get<double>();
            v.ef = c.at("ef").get<double>();
            result.cycles.push_back(v);
        }
        result.ef_all_cycles = doc.at("ef_all_cycles").get<double>();
        result.ef_first_cycle = doc.at("ef_first_cycle").get<double>();
        result.ef_second_cycle = doc.contains("ef_second_cycle")
                                     ? doc.at("ef_second_cycle").get<double>()
                                     : std::numeric_limits<double>::quiet_NaN();
        result.ef = doc.value("ef", result.ef_all_cycles);
        result.hfref = doc.at("hfref").get<bool>();
        if (doc.contains("flags")) {
            result.flags = doc.at("flags").get<std::vector<std::string>>();
        }
    } catch (const json::exception& e) {
        fail(errc::invalid_argument, "'" + path + "' result fields: " + e.what());
    }
    return result;
}

} // namespace lvef
