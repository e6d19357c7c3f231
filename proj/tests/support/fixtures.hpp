#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

// Synthetic echo fixtures for the suites that drive the library from outside
// (shared C API, CLI): raw P5 masks of pulsating ellipses plus matching
// manifest and tracing tables. Everything here is plain standard library so
// the binaries stay independent of the code under test.
namespace testsupport {

inline constexpr double kFixturePi = 3.14159265358979323846;

inline void write_pgm(const std::string& path, int size, double semi_minor, double semi_major) {
    std::ofstream out(path, std::ios::binary);
    out << "P5\n" << size << " " << size << "\n255\n";
    const double cx = size / 2.0, cy = size / 2.0;
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            const double dx = (x - cx) / semi_minor;
            const double dy = (y - cy) / semi_major;
            out.put(dx * dx + dy * dy <= 1.0 ? static_cast<char>(255) : static_cast<char>(0));
        }
    }
}

inline std::string frame_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%05d.pgm", index);
    return buf;
}

// Per-frame scale 1 -> (1 - depth), so the analytic EF is
// 100 * (1 - (1 - depth)^3).
inline void write_video(const std::string& dir, int n_frames, int period, double a0,
                        double depth) {
    std::filesystem::create_directories(dir);
    for (int t = 0; t < n_frames; ++t) {
        const double s = 1.0 - depth * 0.5 * (1.0 - std::cos(2.0 * kFixturePi * t / period));
        write_pgm(dir + "/" + frame_name(t), 80, 0.55 * a0 * s, a0 * s);
    }
}

// One expert trace: the long axis followed by 19 evenly spaced chords of an
// upright ellipse with semi axes (b, a).
inline void append_trace(std::string& csv, const std::string& name, int frame, double cx,
                         double cy, double a, double b) {
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    csv += name + "," + num(cx) + "," + num(cy - a) + "," + num(cx) + "," + num(cy + a) + "," +
           std::to_string(frame) + "\n";
    for (int k = 1; k <= 19; ++k) {
        const double y = cy - a + 2.0 * a * k / 20.0;
        const double w = b * std::sqrt(std::max(0.0, 1.0 - (y - cy) * (y - cy) / (a * a)));
        csv += name + "," + num(cx - w) + "," + num(y) + "," + num(cx + w) + "," + num(y) + "," +
               std::to_string(frame) + "\n";
    }
}

struct TracedCorpus {
    std::string manifest;
    std::string tracings;
};

// Twelve TRAIN videos of two traced frames each; labels span lengths 30..60.
inline TracedCorpus write_traced_corpus(const std::filesystem::path& dir) {
    std::string m = "FileName,EF,ESV,EDV,FrameHeight,FrameWidth,FPS,NumberOfFrames,Split\n";
    std::string t = "FileName,X1,Y1,X2,Y2,Frame\n";
    int i = 0;
    for (double a : {15.0, 16.5, 18.0, 19.5, 21.0, 22.5, 24.0, 25.5, 27.0, 28.5, 30.0, 26.0}) {
        const std::string name = "vid" + std::to_string(i++);
        m += name + ".avi,55.0,30.0,70.0,64,64,50,100,TRAIN\n";
        append_trace(t, name + ".avi", 10, 32.0, 32.0, a, 0.55 * a);
        append_trace(t, name + ".avi", 20, 32.0, 32.0, 0.72 * a, 0.55 * 0.72 * a);
    }
    TracedCorpus corpus;
    corpus.manifest = (dir / "FileList.csv").string();
    corpus.tracings = (dir / "VolumeTracings.csv").string();
    std::ofstream(corpus.manifest) << m;
    std::ofstream(corpus.tracings) << t;
    return corpus;
}

} // namespace testsupport
