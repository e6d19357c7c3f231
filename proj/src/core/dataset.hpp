#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace lvef {

enum class Split { TRAIN, VAL, TEST };

const char* split_name(Split s);
// Case-insensitive; throws errc::malformed_row on anything else.
Split parse_split(const std::string& text, std::size_t line);

// One echocardiogram video's manifest row.
struct VideoRecord {
    std::string file_name;
    double ef_label = 0.0;   // percent
    double esv_label = 0.0;  // milliliters
    double edv_label = 0.0;  // milliliters
    int frame_height = 0;
    int frame_width = 0;
    double fps = 0.0;
    int n_frames = 0;
    Split split = Split::TRAIN;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct Segment {
    Point p1;
    Point p2;
};

// Expert tracing of one frame: the first segment is the LV long axis,
// the remaining segments are chords.
struct TraceFrame {
    std::string file_name;
    int frame_index = 0;
    std::vector<Segment> segments;
};

// Single-channel binary image, row-major, 1 = LV.
struct Mask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    Mask() = default;
    Mask(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h, 0) {}

    std::uint8_t at(int x, int y) const {
        return data[static_cast<std::size_t>(y) * width + x];
    }
    void set(int x, int y, std::uint8_t v) {
        data[static_cast<std::size_t>(y) * width + x] = v;
    }
};

struct MaskSequence {
    std::string video_id;
    int width = 0;
    int height = 0;
    std::vector<Mask> frames;
};

// FileList-style manifest. Requires columns FileName, EF, ESV, EDV,
// FrameHeight, FrameWidth, FPS, NumberOfFrames, Split; extras are ignored.
std::vector<VideoRecord> parse_manifest(const std::string& csv_path);
std::vector<VideoRecord> parse_manifest_text(const std::string& text);
void serialize_manifest(const std::vector<VideoRecord>& records, const std::string& csv_path);
std::string serialize_manifest_text(const std::vector<VideoRecord>& records);

// VolumeTracings-style table with columns FileName, X1, Y1, X2, Y2, Frame.
// Rows for one (video, frame) must be contiguous; their order is preserved
// and the first row of each group is the long axis.
std::map<std::string, std::vector<TraceFrame>> parse_tracings(const std::string& csv_path);
std::map<std::string, std::vector<TraceFrame>> parse_tracings_text(const std::string& text);

// Binary PGM (P5, maxval 255) frames named frame_00000.pgm ... frame_{N-1}.pgm.
// Pixels >= 128 read as LV; writes use 255/0 so a round-trip is bit-identical.
MaskSequence read_mask_sequence(const std::string& dir);
void write_mask_sequence(const MaskSequence& seq, const std::string& dir);

Mask read_pgm(const std::string& path);
void write_pgm(const Mask& mask, const std::string& path);

// "a.avi" and "a" refer to the same video across the two tables.
std::string normalize_video_id(const std::string& raw);

} // namespace lvef
