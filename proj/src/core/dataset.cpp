#include "core/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "core/csv.hpp"
#include "core/errors.hpp"

namespace fs = std::filesystem;

namespace lvef {

const char* split_name(Split s) {
    switch (s) {
        case Split::TRAIN: return "TRAIN";
        case Split::VAL: return "VAL";
        case Split::TEST: return "TEST";
    }
    return "TRAIN";
}

Split parse_split(const std::string& text, std::size_t line) {
    std::string up;
    up.reserve(text.size());
    for (char c : text) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (up == "TRAIN") return Split::TRAIN;
    if (up == "VAL" || up == "VALIDATION") return Split::VAL;
    if (up == "TEST") return Split::TEST;
    fail(errc::malformed_row, "line " + std::to_string(line) + ": unknown split '" + text + "'");
}

std::string normalize_video_id(const std::string& raw) {
    if (raw.size() > 4) {
        std::string tail = raw.substr(raw.size() - 4);
        for (char& c : tail) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (tail == ".avi") return raw.substr(0, raw.size() - 4);
    }
    return raw;
}

static std::vector<VideoRecord> parse_manifest_table(const csv::Table& table) {
    std::size_t c_name = table.require_column("FileName");
    std::size_t c_ef = table.require_column("EF");
    std::size_t c_esv = table.require_column("ESV");
    std::size_t c_edv = table.require_column("EDV");
    std::size_t c_h = table.require_column("FrameHeight");
    std::size_t c_w = table.require_column("FrameWidth");
    std::size_t c_fps = table.require_column("FPS");
    std::size_t c_n = table.require_column("NumberOfFrames");
    std::size_t c_split = table.require_column("Split");

    std::vector<VideoRecord> records;
    records.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        std::size_t line = table.line_numbers[i];
        VideoRecord rec;
        rec.file_name = normalize_video_id(row[c_name]);
        rec.ef_label = csv::parse_double(row[c_ef], line, "EF");
        rec.esv_label = csv::parse_double(row[c_esv], line, "ESV");
        rec.edv_label = csv::parse_double(row[c_edv], line, "EDV");
        rec.frame_height = static_cast<int>(csv::parse_long(row[c_h], line, "FrameHeight"));
        rec.frame_width = static_cast<int>(csv::parse_long(row[c_w], line, "FrameWidth"));
        rec.fps = csv::parse_double(row[c_fps], line, "FPS");
        rec.n_frames = static_cast<int>(csv::parse_long(row[c_n], line, "NumberOfFrames"));
        rec.split = parse_split(row[c_split], line);

        if (rec.file_name.empty())
            fail(errc::malformed_row, "line " + std::to_string(line) + ": empty FileName");
        if (rec.n_frames < 1)
            fail(errc::malformed_row, "line " + std::to_string(line) + ": NumberOfFrames < 1");
        if (!(rec.ef_label > 0.0 && rec.ef_label < 100.0))
            fail(errc::malformed_row, "line " + std::to_string(line) + ": EF outside (0, 100)");
        if (!(rec.esv_label < rec.edv_label))
            fail(errc::malformed_row, "line " + std::to_string(line) + ": ESV >= EDV");
        if (rec.frame_height <= 0 || rec.frame_width <= 0)
            fail(errc::malformed_row, "line " + std::to_string(line) + ": nonpositive frame size");
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<VideoRecord> parse_manifest(const std::string& csv_path) {
    return parse_manifest_table(csv::read_file(csv_path));
}

std::vector<VideoRecord> parse_manifest_text(const std::string& text) {
    return parse_manifest_table(csv::parse(text));
}

std::string serialize_manifest_text(const std::vector<VideoRecord>& records) {
    std::ostringstream out;
    out << "FileName,EF,ESV,EDV,FrameHeight,FrameWidth,FPS,NumberOfFrames,Split\n";
    for (const auto& rec : records) {
        out << rec.file_name << ',' << csv::format_double(rec.ef_label) << ','
            << csv::format_double(rec.esv_label) << ',' << csv::format_double(rec.edv_label)
            << ',' << rec.frame_height << ',' << rec.frame_width << ','
            << csv::format_double(rec.fps) << ',' << rec.n_frames << ','
            << split_name(rec.split) << '\n';
    }
    return out.str();
}

void serialize_manifest(const std::vector<VideoRecord>& records, const std::string& csv_path) {
    std::string tmp = csv_path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(errc::io_error, "cannot open " + tmp + " for writing");
        out << serialize_manifest_text(records);
        if (!out) fail(errc::io_error, "write failed for " + tmp);
    }
    std::error_code ec;
    fs::rename(tmp, csv_path, ec);
    if (ec) fail(errc::io_error, "rename " + tmp + ": " + ec.message());
}

static std::map<std::string, std::vector<TraceFrame>> parse_tracings_table(const csv::Table& table) {
    std::size_t c_name = table.require_column("FileName");
    std::size_t c_x1 = table.require_column("X1");
    std::size_t c_y1 = table.require_column("Y1");
    std::size_t c_x2 = table.require_column("X2");
    std::size_t c_y2 = table.require_column("Y2");
    std::size_t c_frame = table.require_column("Frame");

    std::map<std::string, std::vector<TraceFrame>> result;
    std::string cur_video;
    int cur_frame = -1;
    TraceFrame cur;
    bool open = false;

    auto flush = [&]() {
        if (!open) return;
        if (cur.segments.size() < 2)
            fail(errc::empty_group, "trace group " + cur.file_name + " frame " +
                                        std::to_string(cur.frame_index) +
                                        " has fewer than 2 segments");
        auto& frames = result[cur.file_name];
        for (const auto& f : frames) {
            if (f.frame_index == cur.frame_index)
                fail(errc::malformed_row, "non-contiguous rows for " + cur.file_name +
                                              " frame " + std::to_string(cur.frame_index));
        }
        frames.push_back(std::move(cur));
        cur = TraceFrame{};
        open = false;
    };

    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        std::size_t line = table.line_numbers[i];
        std::string video = normalize_video_id(row[c_name]);
        int frame = static_cast<int>(csv::parse_long(row[c_frame], line, "Frame"));
        if (video.empty())
            fail(errc::malformed_row, "line " + std::to_string(line) + ": empty FileName");
        if (!open || video != cur_video || frame != cur_frame) {
            flush();
            cur_video = video;
            cur_frame = frame;
            cur.file_name = video;
            cur.frame_index = frame;
            open = true;
        }
        Segment seg;
        seg.p1.x = csv::parse_double(row[c_x1], line, "X1");
        seg.p1.y = csv::parse_double(row[c_y1], line, "Y1");
        seg.p2.x = csv::parse_double(row[c_x2], line, "X2");
        seg.p2.y = csv::parse_double(row[c_y2], line, "Y2");
        cur.segments.push_back(seg);
    }
    flush();
    return result;
}

std::map<std::string, std::vector<TraceFrame>> parse_tracings(const std::string& csv_path) {
    return parse_tracings_table(csv::read_file(csv_path));
}

std::map<std::string, std::vector<TraceFrame>> parse_tracings_text(const std::string& text) {
    return parse_tracings_table(csv::parse(text));
}

Mask read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::io_error, "cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    std::string bytes = buffer.str();

    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
        fail(errc::not_pgm, path + ": not a binary PGM (P5) file");

    // header tokens: width, height, maxval; '#' starts a comment to end of line
    std::size_t pos = 2;
    auto next_int = [&](const char* what) -> long {
        while (pos < bytes.size()) {
            char c = bytes[pos];
            if (c == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos;
            } else {
                break;
            }
        }
        if (pos >= bytes.size() || !std::isdigit(static_cast<unsigned char>(bytes[pos])))
            fail(errc::not_pgm, path + ": bad PGM header (" + std::string(what) + ")");
        long value = 0;
        while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
            value = value * 10 + (bytes[pos] - '0');
            ++pos;
        }
        return value;
    };

    long width = next_int("width");
    long height = next_int("height");
    long maxval = next_int("maxval");
    if (width <= 0 || height <= 0)
        fail(errc::not_pgm, path + ": nonpositive dimensions");
    if (maxval <= 0 || maxval > 255)
        fail(errc::not_pgm, path + ": unsupported maxval " + std::to_string(maxval));
    if (pos >= bytes.size())
        fail(errc::not_pgm, path + ": truncated header");
    ++pos; // the single whitespace byte after maxval

    std::size_t expected = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (bytes.size() - pos < expected)
        fail(errc::not_pgm, path + ": truncated pixel data");

    Mask mask(static_cast<int>(width), static_cast<int>(height));
    for (std::size_t i = 0; i < expected; ++i)
        mask.data[i] = static_cast<std::uint8_t>(bytes[pos + i]) >= 128 ? 1 : 0;
    return mask;
}

void write_pgm(const Mask& mask, const std::string& path) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(errc::io_error, "cannot open " + tmp + " for writing");
        out << "P5\n" << mask.width << ' ' << mask.height << "\n255\n";
        std::string pixels(mask.data.size(), '\0');
        for (std::size_t i = 0; i < mask.data.size(); ++i)
            pixels[i] = mask.data[i] ? static_cast<char>(255) : '\0';
        out.write(pixels.data(), static_cast<std::streamsize>(pixels.size()));
        if (!out) fail(errc::io_error, "write failed for " + tmp);
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) fail(errc::io_error, "rename " + tmp + ": " + ec.message());
}

static std::string frame_file_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%05d.pgm", index);
    return buf;
}

MaskSequence read_mask_sequence(const std::string& dir) {
    if (!fs::is_directory(dir))
        fail(errc::io_error, dir + " is not a directory");

    // collect frame_#####.pgm indices present
    std::vector<int> indices;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string name = entry.path().filename().string();
        if (name.size() != 15 || name.rfind("frame_", 0) != 0 ||
            name.substr(11) != ".pgm")
            continue;
        bool digits = true;
        for (int i = 6; i < 11; ++i)
            if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
        if (!digits) continue;
        indices.push_back(std::stoi(name.substr(6, 5)));
    }
    if (indices.empty()) fail(errc::missing_frame, dir + ": frame 0 not found");
    std::sort(indices.begin(), indices.end());
    int max_index = indices.back();
    std::vector<bool> present(static_cast<std::size_t>(max_index) + 1, false);
    for (int idx : indices) present[static_cast<std::size_t>(idx)] = true;
    for (int i = 0; i <= max_index; ++i) {
        if (!present[static_cast<std::size_t>(i)])
            fail(errc::missing_frame, dir + ": frame " + std::to_string(i) + " missing");
    }

    MaskSequence seq;
    seq.video_id = fs::path(dir).filename().string();
    if (seq.video_id.empty()) seq.video_id = fs::path(dir).parent_path().filename().string();
    for (int i = 0; i <= max_index; ++i) {
        Mask m = read_pgm((fs::path(dir) / frame_file_name(i)).string());
        if (seq.frames.empty()) {
            seq.width = m.width;
            seq.height = m.height;
        } else if (m.width != seq.width || m.height != seq.height) {
            fail(errc::dimension_mismatch,
                 dir + ": frame " + std::to_string(i) + " is " + std::to_string(m.width) +
                     "x" + std::to_string(m.height) + ", expected " +
                     std::to_string(seq.width) + "x" + std::to_string(seq.height));
        }
        seq.frames.push_back(std::move(m));
    }
    return seq;
}

void write_mask_sequence(const MaskSequence& seq, const std::string& dir) {
    if (seq.frames.empty())
        fail(errc::invalid_argument, "write_mask_sequence: empty sequence");
    fs::create_directories(dir);
    for (std::size_t i = 0; i < seq.frames.size(); ++i) {
        const Mask& m = seq.frames[i];
        if (m.width != seq.width || m.height != seq.height)
            fail(errc::dimension_mismatch, "write_mask_sequence: frame " + std::to_string(i) +
                                               " dimensions differ from sequence");
        write_pgm(m, (fs::path(dir) / frame_file_name(static_cast<int>(i))).string());
    }
}

} // namespace lvef
