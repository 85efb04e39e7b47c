#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace embkit {

inline constexpr const char* kToolkitVersion = "0.1.0";

// 64-bit content digest of a file (FNV-1a over raw bytes).
std::uint64_t digest_file(const std::string& path);
std::string digest_hex(std::uint64_t digest);

// Reproducibility record written next to every report. Wall-clock fields
// live only here so the reports themselves stay byte-identical across
// reruns with the same seed.
struct RunManifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<std::pair<std::string, std::string>> inputs;  // path -> digest hex
    std::uint64_t seed = 0;
    std::string version = kToolkitVersion;
    double duration_ms = 0.0;
    std::vector<std::string> outputs;
};

std::string manifest_json(const RunManifest& m);
void write_manifest(const RunManifest& m, const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

struct ChartSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

struct ChartSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log2_x = true;
    std::vector<ChartSeries> series;
};

// Minimal standalone SVG: axes, tick labels, one polyline with point
// markers per series. No plotting dependency.
std::string svg_line_chart(const ChartSpec& spec);

// Spearman rank correlation with mid-rank ties.
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace embkit
